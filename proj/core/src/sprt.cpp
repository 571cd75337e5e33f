#include "smcedp/sprt.hpp"

#include <cmath>

#include "smcedp/errors.hpp"

namespace smcedp {

void SprtConfig::validate() const {
  if (!(indifference > 0.0)) {
    throw ConfigError("indifference half-width delta must be positive");
  }
  if (!(threshold - indifference > 0.0) ||
      !(threshold + indifference < 1.0)) {
    throw ConfigError(
        "threshold p and half-width delta must satisfy 0 < p - delta and "
        "p + delta < 1");
  }
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw ConfigError("error level alpha must lie in (0, 1/2)");
  }
  if (cap == 0) throw ConfigError("draw cap must be at least 1");
}

StepSizes step_sizes(const SprtConfig& config) {
  config.validate();
  const double p = config.threshold;
  const double d = config.indifference;
  return StepSizes{std::log((p + d) / (p - d)),
                   std::log((1.0 - p + d) / (1.0 - p - d))};
}

double decision_bound(const SprtConfig& config) {
  config.validate();
  return std::log((1.0 - config.alpha) / config.alpha);
}

double likelihood_ratio(const SprtConfig& config, std::uint64_t successes,
                        std::uint64_t draws) {
  if (successes > draws) {
    throw DomainError("success count cannot exceed draw count");
  }
  const StepSizes steps = step_sizes(config);
  const double k = static_cast<double>(successes);
  const double n = static_cast<double>(draws);
  return std::exp(k * steps.up - (n - k) * steps.down);
}

SprtState SprtState::fresh(const SprtConfig& config) {
  const StepSizes steps = step_sizes(config);
  SprtState state;
  state.step_up = steps.up;
  state.step_down = steps.down;
  return state;
}

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::kNull:
      return "null";
    case Outcome::kAlt:
      return "alt";
    case Outcome::kUndecided:
      return "undecided";
  }
  throw DomainError("unknown outcome");
}

namespace {

RunRecord record_from(const SprtConfig& config, const SprtState& state,
                      Outcome outcome, std::uint64_t seed) {
  RunRecord record;
  record.algorithm = "sprt-deterministic";
  record.outcome = outcome;
  record.tau = state.draws;
  record.successes = state.successes;
  record.final_log_ratio = state.log_ratio;
  record.seed = seed;
  record.config = config;
  return record;
}

}  // namespace

RunRecord run_sprt_bits(const SprtConfig& config,
                        const std::function<bool()>& next_bit,
                        std::uint64_t seed) {
  Outcome outcome = Outcome::kUndecided;
  const SprtState state = run_sprt_core(config, 0.0, next_bit, outcome);
  return record_from(config, state, outcome, seed);
}

RunRecord run_sprt(SampleSource& source, const Formula& formula,
                   const SprtConfig& config, Rng& rng) {
  Outcome outcome = Outcome::kUndecided;
  const SprtState state = run_sprt_core(
      config, 0.0,
      [&] { return satisfies(formula, source.next(rng)); }, outcome);
  return record_from(config, state, outcome, rng.root_seed());
}

std::uint64_t k1_threshold(const SprtConfig& config) {
  const double bound = decision_bound(config);
  const double up = step_sizes(config).up;
  /* Unique K1 with K1 * up < bound <= (K1 + 1) * up; compute by rounding
   * and fix up against floating-point edge cases. */
  double guess = std::ceil(bound / up) - 1.0;
  if (guess < 0.0) guess = 0.0;
  auto k1 = static_cast<std::uint64_t>(guess);
  while (static_cast<double>(k1 + 1) * up < bound) ++k1;
  while (k1 > 0 && static_cast<double>(k1) * up >= bound) --k1;
  return k1;
}

CounterexamplePair counterexample_pair(const SprtConfig& config) {
  config.validate();
  if (config.threshold != 0.5) {
    throw DomainError(
        "counterexample pair requires a symmetric test (threshold 1/2): an "
        "asymmetric test drifts on the alternating tail and decides");
  }
  const std::uint64_t k1 = k1_threshold(config);
  if (k1 == 0) {
    throw DomainError(
        "decision bound does not exceed one step: the flipped script would "
        "cross the lower bound instead of oscillating");
  }
  CounterexamplePair pair;
  pair.flip_index = k1;
  /* First script: k1 + 1 leading satisfactions push the log-ratio over the
   * bound immediately; the alternating tail is never consumed. */
  pair.deciding = [k1](std::uint64_t i) {
    return i <= k1 || (i - k1) % 2 == 0;
  };
  /* Second script: one bit flipped at k1, after which the strict alternation
   * cancels every excursion and the log-ratio stays inside the bounds. */
  pair.oscillating = [k1](std::uint64_t i) {
    if (i < k1) return true;
    if (i == k1) return false;
    return (i - k1) % 2 == 0;
  };
  return pair;
}

}  // namespace smcedp
