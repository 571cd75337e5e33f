#include "smcedp/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "number_format.hpp"
#include "smcedp/errors.hpp"
#include "smcedp/parallel.hpp"
#include "smcedp/version.hpp"

namespace smcedp {

namespace {

constexpr std::uint64_t kNoiseStream = 0x61756454006e6f69ull;
constexpr std::uint64_t kCellStream = 0x6175645400636c6cull;

/* Everything one (L, flip) column of the audit produces. */
struct ColumnStats {
  double att = 0.0;
  std::uint64_t cap_hits = 0;
  std::uint64_t tau_sum = 0;
  std::uint64_t outcome_counts[3] = {0, 0, 0};
};

ColumnStats run_column(const AuditConfig& config, bool flip_value,
                       double noise, std::uint64_t noise_index) {
  ColumnStats stats;
  for (std::uint64_t j = 0; j < config.pairs; ++j) {
    /* One stream per cell, shared by both flip classes: common random
     * numbers keep the coupled runs identical away from the flipped bit. */
    Rng cell(config.seed, {kCellStream, noise_index, j});
    std::uint64_t position = 0;
    Outcome outcome = Outcome::kUndecided;
    const SprtState state = run_sprt_core(
        config.edp.base, noise,
        [&] {
          /* Draw at every position, including the pinned one, so the two
           * classes consume identical stream prefixes. */
          const bool sampled = cell.bernoulli(config.bit_probability);
          const bool bit =
              position == config.flip_index ? flip_value : sampled;
          ++position;
          return bit;
        },
        outcome);
    stats.tau_sum += state.draws;
    if (outcome == Outcome::kUndecided) ++stats.cap_hits;
    ++stats.outcome_counts[static_cast<int>(outcome)];
  }
  stats.att = static_cast<double>(stats.tau_sum) /
              static_cast<double>(config.pairs);
  return stats;
}

}  // namespace

void AuditConfig::validate() const {
  edp.validate();
  if (!(bit_probability >= 0.0 && bit_probability <= 1.0)) {
    throw ConfigError("audit bit probability must lie in [0, 1]");
  }
  if (pairs == 0) throw ConfigError("audit needs at least one pair per L");
  if (noise_samples == 0) {
    throw ConfigError("audit needs at least one noise sample");
  }
  if (!(bin_width > 0.0)) throw ConfigError("bin width must be positive");
  if (!(min_expected_count > 0.0)) {
    throw ConfigError("minimum expected count must be positive");
  }
  if (!(slack >= 1.0)) throw ConfigError("audit slack must be at least 1");
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
}

double accuracy(const std::vector<Outcome>& outcomes, Outcome truth) {
  if (outcomes.empty()) {
    throw DomainError("accuracy of an empty outcome list is undefined");
  }
  if (truth == Outcome::kUndecided) {
    throw DomainError("the reference hypothesis must be Null or Alt");
  }
  std::size_t matches = 0;
  for (const Outcome outcome : outcomes) {
    if (outcome == truth) ++matches;
  }
  return static_cast<double>(matches) /
         static_cast<double>(outcomes.size());
}

double att(const AuditConfig& config, bool flip_value, double noise,
           std::uint64_t noise_index) {
  config.validate();
  if (!(noise >= 0.0)) {
    throw DomainError("bound inflation must be nonnegative");
  }
  return run_column(config, flip_value, noise, noise_index).att;
}

AuditReport run_audit(const AuditConfig& config) {
  config.validate();

  AuditReport report;
  report.config = config;
  report.noise_values.resize(config.noise_samples);
  report.att_flip1.resize(config.noise_samples);
  report.att_flip0.resize(config.noise_samples);

  std::vector<ColumnStats> stats1(config.noise_samples);
  std::vector<ColumnStats> stats0(config.noise_samples);

  parallel_for(config.noise_samples, config.jobs, [&](std::size_t l) {
    Rng noise_rng(config.seed, {kNoiseStream, l});
    const double noise = sample_noise(config.edp, noise_rng).value;
    report.noise_values[l] = noise;
    stats1[l] = run_column(config, true, noise, l);
    stats0[l] = run_column(config, false, noise, l);
    report.att_flip1[l] = stats1[l].att;
    report.att_flip0[l] = stats0[l].att;
  });

  /* Reduce in index order so the report is independent of scheduling. */
  std::uint64_t tau_sum = 0;
  std::uint64_t outcome_counts[3] = {0, 0, 0};
  for (std::size_t l = 0; l < config.noise_samples; ++l) {
    for (const auto* stats : {&stats1[l], &stats0[l]}) {
      tau_sum += stats->tau_sum;
      report.cap_hits += stats->cap_hits;
      for (int i = 0; i < 3; ++i) outcome_counts[i] += stats->outcome_counts[i];
    }
  }
  const auto total_runs = static_cast<double>(2 * config.noise_samples *
                                              config.pairs);
  report.mean_tau = static_cast<double>(tau_sum) / total_runs;
  const Outcome truth = config.bit_probability > config.edp.base.threshold
                            ? Outcome::kNull
                            : Outcome::kAlt;
  report.accuracy =
      static_cast<double>(outcome_counts[static_cast<int>(truth)]) /
      total_runs;

  /* Shared histogram grid anchored at 0. */
  const double max_att =
      std::max(*std::max_element(report.att_flip1.begin(),
                                 report.att_flip1.end()),
               *std::max_element(report.att_flip0.begin(),
                                 report.att_flip0.end()));
  const auto bin_count =
      static_cast<std::size_t>(std::floor(max_att / config.bin_width)) + 1;
  report.bins.resize(bin_count);
  for (std::size_t b = 0; b < bin_count; ++b) {
    report.bins[b].lower = static_cast<double>(b) * config.bin_width;
    report.bins[b].upper = static_cast<double>(b + 1) * config.bin_width;
  }
  for (std::size_t l = 0; l < config.noise_samples; ++l) {
    const auto b1 = static_cast<std::size_t>(
        std::floor(report.att_flip1[l] / config.bin_width));
    const auto b0 = static_cast<std::size_t>(
        std::floor(report.att_flip0[l] / config.bin_width));
    ++report.bins[b1].count_flip1;
    ++report.bins[b0].count_flip0;
  }

  const auto samples = static_cast<double>(config.noise_samples);
  std::size_t qualifying = 0;
  std::size_t occupied1 = 0;
  std::size_t occupied0 = 0;
  report.max_ratio = 1.0;
  for (auto& bin : report.bins) {
    bin.mass_flip1 = static_cast<double>(bin.count_flip1) / samples;
    bin.mass_flip0 = static_cast<double>(bin.count_flip0) / samples;
    if (bin.count_flip1 > 0) ++occupied1;
    if (bin.count_flip0 > 0) ++occupied0;
    bin.qualifies =
        static_cast<double>(bin.count_flip1) >= config.min_expected_count &&
        static_cast<double>(bin.count_flip0) >= config.min_expected_count;
    if (bin.qualifies) {
      ++qualifying;
      bin.ratio = bin.mass_flip1 / bin.mass_flip0;
      report.max_ratio =
          std::max({report.max_ratio, bin.ratio, 1.0 / bin.ratio});
    }
  }

  report.bound = std::exp(2.0 * config.edp.epsilon) * config.slack;
  report.pass = report.max_ratio <= report.bound;
  report.degenerate = qualifying == 0 || occupied1 <= 1 || occupied0 <= 1;
  return report;
}

namespace {

using OrderedJson = nlohmann::ordered_json;

OrderedJson config_to_value(const AuditConfig& config) {
  return OrderedJson{
      {"threshold", config.edp.base.threshold},
      {"indifference", config.edp.base.indifference},
      {"alpha", config.edp.base.alpha},
      {"cap", config.edp.base.cap},
      {"epsilon", config.edp.epsilon},
      {"bit_probability", config.bit_probability},
      {"flip_index", config.flip_index},
      {"pairs", config.pairs},
      {"noise_samples", config.noise_samples},
      {"bin_width", config.bin_width},
      {"min_expected_count", config.min_expected_count},
      {"slack", config.slack},
      {"seed", config.seed},
  };
}

}  // namespace

std::string to_json(const AuditReport& report) {
  OrderedJson bins = OrderedJson::array();
  for (const auto& bin : report.bins) {
    bins.push_back(OrderedJson{
        {"bin_left", bin.lower},
        {"bin_right", bin.upper},
        {"mass_flip1", bin.mass_flip1},
        {"mass_flip0", bin.mass_flip0},
        {"ratio", bin.ratio},
        {"qualifies", bin.qualifies},
    });
  }
  OrderedJson value{
      {"algorithm", "edp-audit"},
      {"algorithm_version", kAlgorithmVersion},
      {"rng", Rng::kAlgorithm},
      {"config", config_to_value(report.config)},
      {"max_ratio", report.max_ratio},
      {"bound", report.bound},
      {"pass", report.pass},
      {"degenerate", report.degenerate},
      {"accuracy", report.accuracy},
      {"mean_tau", report.mean_tau},
      {"cap_hits", report.cap_hits},
      {"bins", std::move(bins)},
  };
  return value.dump(2);
}

std::string histogram_to_csv(const AuditReport& report) {
  std::string out = "bin_left,bin_right,mass_flip1,mass_flip0,ratio,qualifies\n";
  for (const auto& bin : report.bins) {
    out += detail::format_double(bin.lower);
    out += ",";
    out += detail::format_double(bin.upper);
    out += ",";
    out += detail::format_double(bin.mass_flip1);
    out += ",";
    out += detail::format_double(bin.mass_flip0);
    out += ",";
    out += bin.qualifies ? detail::format_double(bin.ratio) : "";
    out += ",";
    out += bin.qualifies ? "1" : "0";
    out += "\n";
  }
  return out;
}

std::string att_samples_to_csv(const AuditReport& report) {
  std::string out = "noise_index,L,att_flip1,att_flip0\n";
  for (std::size_t l = 0; l < report.noise_values.size(); ++l) {
    out += std::to_string(l);
    out += ",";
    out += detail::format_double(report.noise_values[l]);
    out += ",";
    out += detail::format_double(report.att_flip1[l]);
    out += ",";
    out += detail::format_double(report.att_flip0[l]);
    out += "\n";
  }
  return out;
}

std::string render_audit_summary(const AuditReport& report) {
  std::string out;
  out += "privacy audit: epsilon = " +
         detail::format_double(report.config.edp.epsilon) + ", " +
         std::to_string(report.config.noise_samples) + " noise samples x " +
         std::to_string(report.config.pairs) + " pairs\n";
  out += "  mean termination time " + detail::format_double(report.mean_tau) +
         ", accuracy " + detail::format_double(report.accuracy) +
         ", cap hits " + std::to_string(report.cap_hits) + "\n";
  out += "  max per-bin mass ratio " + detail::format_double(report.max_ratio) +
         " vs bound " + detail::format_double(report.bound) + " -> " +
         (report.pass ? "PASS" : "FAIL") +
         (report.degenerate ? " (degenerate)" : "") + "\n";
  out += "  ATT histogram (bin width " +
         detail::format_double(report.config.bin_width) + "): flip=1 | flip=0\n";

  std::uint64_t peak = 1;
  for (const auto& bin : report.bins) {
    peak = std::max({peak, bin.count_flip1, bin.count_flip0});
  }
  constexpr std::size_t kBarWidth = 30;
  for (const auto& bin : report.bins) {
    if (bin.count_flip1 == 0 && bin.count_flip0 == 0) continue;
    const auto bar = [&](std::uint64_t count) {
      const auto length = static_cast<std::size_t>(
          std::llround(static_cast<double>(count) * kBarWidth /
                       static_cast<double>(peak)));
      return std::string(length, '#') +
             std::string(kBarWidth - length, ' ');
    };
    char label[64];
    std::snprintf(label, sizeof(label), "  [%8.0f,%8.0f) ", bin.lower,
                  bin.upper);
    out += label;
    out += bar(bin.count_flip1);
    out += " | ";
    out += bar(bin.count_flip0);
    out += bin.qualifies ? "  *\n" : "\n";
  }
  out += "  (* = bin qualifies for the ratio check)\n";
  return out;
}

}  // namespace smcedp
