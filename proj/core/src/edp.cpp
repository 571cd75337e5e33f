#include "smcedp/edp.hpp"

#include <cmath>

#include "smcedp/errors.hpp"

namespace smcedp {

namespace {

/* Stream id for the bound-noise draw inside run_edp; keeps the main stream
 * untouched so trace draws line up with the plain test. */
constexpr std::uint64_t kNoiseStream = 0x65647000006e7a65ull;

}  // namespace

void EdpConfig::validate() const {
  base.validate();
  if (!(epsilon > 0.0)) {
    throw ConfigError("privacy level epsilon must be positive");
  }
}

double noise_rate(const EdpConfig& config) {
  config.validate();
  const StepSizes steps = step_sizes(config.base);
  return config.epsilon / (steps.up + steps.down);
}

NoiseDraw sample_noise(const EdpConfig& config, Rng& rng) {
  const double rate = noise_rate(config);
  return NoiseDraw{rng.exponential(rate), rate};
}

NoiseDraw noise_from_uniform(const EdpConfig& config, double uniform) {
  if (!(uniform > 0.0 && uniform <= 1.0)) {
    throw DomainError("inverse-CDF uniform must lie in (0, 1]");
  }
  const double rate = noise_rate(config);
  return NoiseDraw{-std::log(uniform) / rate, rate};
}

namespace {

RunRecord edp_record(const EdpConfig& config, const SprtState& state,
                     Outcome outcome, double noise, double rate,
                     std::uint64_t seed) {
  RunRecord record;
  record.algorithm = "sprt-edp";
  record.outcome = outcome;
  record.tau = state.draws;
  record.successes = state.successes;
  record.final_log_ratio = state.log_ratio;
  record.seed = seed;
  record.config = config.base;
  record.epsilon = config.epsilon;
  record.noise = noise;
  record.noise_rate = rate;
  return record;
}

}  // namespace

RunRecord run_edp_bits(const EdpConfig& config, double noise,
                       const std::function<bool()>& next_bit,
                       std::uint64_t seed) {
  if (!(noise >= 0.0)) {
    throw DomainError("bound inflation must be nonnegative");
  }
  Outcome outcome = Outcome::kUndecided;
  const SprtState state =
      run_sprt_core(config.base, noise, next_bit, outcome);
  return edp_record(config, state, outcome, noise, noise_rate(config), seed);
}

RunRecord run_edp(SampleSource& source, const Formula& formula,
                  const EdpConfig& config, Rng& rng) {
  Rng noise_rng = rng.split(kNoiseStream);
  const NoiseDraw draw = sample_noise(config, noise_rng);
  Outcome outcome = Outcome::kUndecided;
  const SprtState state = run_sprt_core(
      config.base, draw.value,
      [&] { return satisfies(formula, source.next(rng)); }, outcome);
  return edp_record(config, state, outcome, draw.value, draw.rate,
                    rng.root_seed());
}

double average_step(const SprtConfig& config,
                    double satisfaction_probability) {
  if (!(satisfaction_probability >= 0.0 &&
        satisfaction_probability <= 1.0)) {
    throw DomainError("satisfaction probability must lie in [0, 1]");
  }
  const StepSizes steps = step_sizes(config);
  return satisfaction_probability * steps.up -
         (1.0 - satisfaction_probability) * steps.down;
}

double expected_termination(double upper, double lower, double drift) {
  if (!(upper > 0.0) || !(lower > 0.0)) {
    throw DomainError("stopping bounds must be positive");
  }
  if (drift == 0.0) {
    throw DomainError(
        "expected-termination approximation is undefined at zero drift");
  }
  if (drift > 0.0) {
    const double miss = std::exp(-lower);
    return (upper * (1.0 - miss) - lower * miss) / drift;
  }
  const double miss = std::exp(-upper);
  return (lower * (1.0 - miss) - upper * miss) / (-drift);
}

double expected_sensitivity(const SprtConfig& config,
                            double satisfaction_probability) {
  const double drift = average_step(config, satisfaction_probability);
  if (drift == 0.0) {
    throw DomainError("expected sensitivity is undefined at zero drift");
  }
  const StepSizes steps = step_sizes(config);
  return (steps.up + steps.down) / std::abs(drift);
}

std::map<std::uint64_t, double> exponential_mechanism_pmf(
    std::uint64_t tau, double sensitivity, double epsilon,
    const std::vector<std::uint64_t>& support) {
  if (support.empty()) {
    throw DomainError("exponential mechanism needs a nonempty support");
  }
  if (!(sensitivity > 0.0)) {
    throw DomainError("sensitivity must be positive");
  }
  if (!(epsilon > 0.0)) {
    throw DomainError("privacy level epsilon must be positive");
  }
  std::map<std::uint64_t, double> pmf;
  double total = 0.0;
  for (const std::uint64_t k : support) {
    const double distance =
        k >= tau ? static_cast<double>(k - tau) : static_cast<double>(tau - k);
    const double weight = std::exp(-epsilon * distance / sensitivity);
    pmf[k] += weight;
    total += weight;
  }
  for (auto& [k, weight] : pmf) weight /= total;
  return pmf;
}

}  // namespace smcedp
