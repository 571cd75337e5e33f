#include "smcedp/parametrized.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "number_format.hpp"
#include "smcedp/errors.hpp"
#include "smcedp/parser.hpp"
#include "smcedp/version.hpp"

namespace smcedp {

namespace {

constexpr std::uint64_t kEtaStream = 0x706172616d657461ull;

std::string substitute(const std::string& template_text,
                       const std::vector<double>& values) {
  std::string out;
  out.reserve(template_text.size());
  std::size_t pos = 0;
  while (pos < template_text.size()) {
    const char c = template_text[pos];
    if (c != '{') {
      out += c;
      ++pos;
      continue;
    }
    const std::size_t close = template_text.find('}', pos);
    if (close == std::string::npos) {
      throw ConfigError("unterminated '{' in family template");
    }
    const std::string hole = template_text.substr(pos + 1, close - pos - 1);
    std::size_t parsed = 0;
    std::size_t index = 0;
    try {
      index = std::stoul(hole, &parsed);
    } catch (const std::exception&) {
      parsed = 0;
    }
    if (parsed != hole.size() || hole.empty()) {
      throw ConfigError("family template hole '{" + hole +
                        "}' is not a parameter index");
    }
    if (index >= values.size()) {
      throw ConfigError("family template hole {" + hole +
                        "} exceeds the parameter vector width " +
                        std::to_string(values.size()));
    }
    out += detail::format_double(values[index]);
    pos = close + 1;
  }
  return out;
}

std::string tuple_label(const std::vector<double>& values) {
  std::string label = "theta=(";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) label += ",";
    label += detail::format_double(values[i]);
  }
  label += ")";
  return label;
}

}  // namespace

Family::Family(std::vector<Formula> members, std::vector<std::string> labels)
    : members_(std::move(members)), labels_(std::move(labels)) {
  if (members_.empty()) {
    throw DomainError("a formula family needs at least one member");
  }
  if (labels_.empty()) {
    labels_.reserve(members_.size());
    for (std::size_t i = 0; i < members_.size(); ++i) {
      labels_.push_back("member" + std::to_string(i));
    }
  }
  if (labels_.size() != members_.size()) {
    throw DomainError("family labels must match the member count");
  }
}

Family Family::from_template(const std::string& template_text,
                             const std::vector<std::vector<double>>& grid) {
  if (grid.empty()) {
    throw ConfigError("family parameter grid is empty");
  }
  std::vector<Formula> members;
  std::vector<std::string> labels;
  members.reserve(grid.size());
  labels.reserve(grid.size());
  for (const auto& row : grid) {
    members.push_back(parse_formula(substitute(template_text, row)));
    labels.push_back(tuple_label(row));
  }
  return Family(std::move(members), std::move(labels));
}

Family Family::load(const std::filesystem::path& template_file,
                    const std::filesystem::path& grid_csv) {
  std::ifstream tmpl(template_file);
  if (!tmpl) {
    throw SourceError("cannot open family template " + template_file.string());
  }
  std::stringstream buffer;
  buffer << tmpl.rdbuf();

  std::ifstream grid_in(grid_csv);
  if (!grid_in) {
    throw SourceError("cannot open parameter grid " + grid_csv.string());
  }
  std::string line;
  if (!std::getline(grid_in, line)) {
    throw SourceError(grid_csv.string() + ": empty parameter grid");
  }
  /* Header row just fixes the width; names are documentation. */
  const std::size_t width =
      static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;

  std::vector<std::vector<double>> grid;
  std::size_t row_number = 1;
  while (std::getline(grid_in, line)) {
    ++row_number;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw SourceError(grid_csv.string() + ": row " +
                          std::to_string(row_number) + ": bad number '" +
                          cell + "'");
      }
    }
    if (row.size() != width) {
      throw SourceError(grid_csv.string() + ": row " +
                        std::to_string(row_number) + " has " +
                        std::to_string(row.size()) + " cells, expected " +
                        std::to_string(width));
    }
    grid.push_back(std::move(row));
  }
  return from_template(buffer.str(), grid);
}

SatisfactionMatrix::SatisfactionMatrix(std::size_t members)
    : rows_(members), counts_(members, 0) {
  if (members == 0) {
    throw DomainError("satisfaction matrix needs at least one member");
  }
}

void SatisfactionMatrix::append(const std::vector<bool>& bits) {
  if (bits.size() != members()) {
    throw DomainError("satisfaction column width does not match the family");
  }
  const std::size_t word = samples_ / 64;
  const std::uint64_t mask = 1ull << (samples_ % 64);
  for (std::size_t m = 0; m < bits.size(); ++m) {
    if (rows_[m].size() <= word) rows_[m].push_back(0);
    if (bits[m]) {
      rows_[m][word] |= mask;
      ++counts_[m];
    }
  }
  ++samples_;
}

bool SatisfactionMatrix::at(std::size_t member, std::size_t sample) const {
  if (member >= members() || sample >= samples_) {
    throw DomainError("satisfaction matrix index out of range");
  }
  return (rows_[member][sample / 64] >> (sample % 64)) & 1u;
}

double empirical_min(const std::vector<std::uint64_t>& counts,
                     std::uint64_t samples) {
  if (counts.empty()) {
    throw DomainError("empirical minimum of an empty family is undefined");
  }
  if (samples == 0) {
    throw DomainError("empirical minimum requires at least one sample");
  }
  const std::uint64_t smallest =
      *std::min_element(counts.begin(), counts.end());
  return static_cast<double>(smallest) / static_cast<double>(samples);
}

double rademacher_average(const SatisfactionMatrix& matrix, std::size_t draws,
                          Rng& rng) {
  if (draws == 0) {
    throw DomainError("Rademacher estimate needs at least one sign vector");
  }
  const std::size_t n = matrix.samples();
  if (n == 0) {
    throw DomainError("Rademacher average of zero samples is undefined");
  }
  const std::size_t words = (n + 63) / 64;
  const std::uint64_t tail_mask =
      n % 64 == 0 ? ~0ull : (1ull << (n % 64)) - 1;

  std::vector<std::uint64_t> signs(words);
  double total = 0.0;
  for (std::size_t draw = 0; draw < draws; ++draw) {
    for (std::size_t w = 0; w < words; ++w) signs[w] = rng.next_u64();
    signs[words - 1] &= tail_mask;

    double best = 0.0;
    for (std::size_t m = 0; m < matrix.members(); ++m) {
      const auto& row = matrix.row(m);
      /* Sign bit set means eta_i = +1. Summing eta_i over the satisfying
       * positions of the row: (+1) on agreeing bits, (-1) on the rest, so
       * the sum is 2 * |row & signs| - |row|. */
      std::int64_t agree = 0;
      for (std::size_t w = 0; w < words; ++w) {
        agree += std::popcount(row[w] & signs[w]);
      }
      const auto ones = static_cast<std::int64_t>(matrix.count(m));
      const double value =
          std::abs(static_cast<double>(2 * agree - ones)) /
          static_cast<double>(n);
      best = std::max(best, value);
    }
    total += best;
  }
  return total / static_cast<double>(draws);
}

double interval_radius(double rademacher, double alpha,
                       std::uint64_t samples) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("confidence level alpha must lie in (0, 1)");
  }
  if (samples == 0) {
    throw DomainError("confidence radius requires at least one sample");
  }
  if (!(rademacher >= 0.0)) {
    throw DomainError("Rademacher average must be nonnegative");
  }
  return 2.0 * rademacher +
         std::sqrt(-9.0 * std::log(alpha) /
                   (2.0 * static_cast<double>(samples)));
}

void CiOptions::validate() const {
  if (eta_draws == 0) {
    throw ConfigError("eta_draws must be at least 1");
  }
  if (recompute_every == 0) {
    throw ConfigError("recompute_every must be at least 1");
  }
  if (cap == 0) throw ConfigError("sample cap must be at least 1");
}

CiRunRecord run_ci_smc(SampleSource& source, const Family& family,
                       double threshold, double alpha,
                       const CiOptions& options, Rng& rng) {
  options.validate();
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ConfigError("threshold must lie in (0, 1)");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("confidence level alpha must lie in (0, 1)");
  }

  SatisfactionMatrix matrix(family.size());
  std::vector<bool> bits(family.size());

  CiRunRecord record;
  record.threshold = threshold;
  record.alpha = alpha;
  record.seed = rng.root_seed();
  record.options = options;
  record.outcome = Outcome::kUndecided;

  while (matrix.samples() < options.cap) {
    const Signal signal = source.next(rng);
    for (std::size_t m = 0; m < family.size(); ++m) {
      bits[m] = satisfies(family.member(m), signal);
    }
    matrix.append(bits);

    const std::size_t n = matrix.samples();
    if (n % options.recompute_every != 0 && n != options.cap) continue;

    /* Fresh sign vectors from a stream tied to n: reruns are reproducible
     * and the sample stream is left untouched. */
    Rng eta = rng.split(kEtaStream).split(n);
    const double r = rademacher_average(matrix, options.eta_draws, eta);
    const double d =
        interval_radius(r, alpha, static_cast<std::uint64_t>(n));
    std::vector<std::uint64_t> counts(family.size());
    for (std::size_t m = 0; m < family.size(); ++m) {
      counts[m] = matrix.count(m);
    }
    const double lower = empirical_min(counts, n);

    record.rademacher = r;
    record.radius = d;
    record.empirical_min = lower;
    if (lower - d > threshold) {
      record.outcome = Outcome::kNull;
      break;
    }
    if (lower + d < threshold) {
      record.outcome = Outcome::kAlt;
      break;
    }
  }

  record.tau = matrix.samples();
  record.member_counts.resize(family.size());
  record.member_labels.resize(family.size());
  for (std::size_t m = 0; m < family.size(); ++m) {
    record.member_counts[m] = matrix.count(m);
    record.member_labels[m] = family.label(m);
  }
  return record;
}

std::string to_json(const CiRunRecord& record) {
  using OrderedJson = nlohmann::ordered_json;
  OrderedJson members = OrderedJson::array();
  for (std::size_t m = 0; m < record.member_counts.size(); ++m) {
    members.push_back(OrderedJson{
        {"label", record.member_labels[m]},
        {"count", record.member_counts[m]},
    });
  }
  OrderedJson value{
      {"algorithm", "ci-smc"},
      {"algorithm_version", kAlgorithmVersion},
      {"rng", Rng::kAlgorithm},
      {"outcome", to_string(record.outcome)},
      {"tau", record.tau},
      {"seed", record.seed},
      {"config",
       OrderedJson{
           {"threshold", record.threshold},
           {"alpha", record.alpha},
           {"eta_draws", record.options.eta_draws},
           {"recompute_every", record.options.recompute_every},
           {"cap", record.options.cap},
       }},
      {"empirical_min", record.empirical_min},
      {"radius", record.radius},
      {"rademacher", record.rademacher},
      {"members", std::move(members)},
  };
  return value.dump(2);
}

}  // namespace smcedp
