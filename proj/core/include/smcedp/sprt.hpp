#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "smcedp/formula.hpp"
#include "smcedp/models.hpp"
#include "smcedp/rng.hpp"

namespace smcedp {

/* Sequential test of H_null: p_phi >= p + delta against H_alt:
 * p_phi <= p - delta at error level alpha. */
struct SprtConfig {
  double threshold = 0.5;      /* p */
  double indifference = 0.05;  /* delta, half-width of the indifference gap */
  double alpha = 0.05;         /* bound on both error probabilities */
  std::uint64_t cap = 1000000; /* draw budget before giving up */

  /* Throws ConfigError unless 0 < p - delta, p + delta < 1,
   * 0 < alpha < 1/2 and cap >= 1. */
  void validate() const;
};

/* Per-observation log-likelihood increments: a satisfying draw adds `up`
 * (ln((p+delta)/(p-delta))), a violating draw subtracts `down`
 * (ln((1-p+delta)/(1-p-delta))). Both are positive for valid configs. */
struct StepSizes {
  double up = 0.0;
  double down = 0.0;
};

StepSizes step_sizes(const SprtConfig& config);

/* Decision bound B = ln((1 - alpha) / alpha); the test stops when the
 * log-ratio leaves (-B, B). */
double decision_bound(const SprtConfig& config);

/* Likelihood ratio after `draws` observations with `successes` satisfying,
 * computed in log space and exponentiated; equals 1 before any draw. */
double likelihood_ratio(const SprtConfig& config, std::uint64_t successes,
                        std::uint64_t draws);

/* Running state of one sequential test. */
struct SprtState {
  std::uint64_t draws = 0;     /* N */
  std::uint64_t successes = 0; /* K */
  double log_ratio = 0.0;      /* Lambda = K*up - (N-K)*down */
  double step_up = 0.0;
  double step_down = 0.0;

  static SprtState fresh(const SprtConfig& config);

  /* Fold in one Bernoulli observation. */
  void update(bool satisfied) {
    ++draws;
    if (satisfied) {
      ++successes;
      log_ratio += step_up;
    } else {
      log_ratio -= step_down;
    }
  }
};

enum class Outcome { kNull, kAlt, kUndecided };

std::string to_string(Outcome outcome);

/* Everything one test run produced; serializable via run_record.hpp. */
struct RunRecord {
  std::string algorithm;       /* "sprt-deterministic" or "sprt-edp" */
  Outcome outcome = Outcome::kUndecided;
  std::uint64_t tau = 0;       /* draws consumed when the run stopped */
  std::uint64_t successes = 0; /* satisfying draws among them */
  double final_log_ratio = 0.0;
  std::uint64_t seed = 0; /* root seed of the stream that drove the run */
  SprtConfig config;
  /* Present only for privatized runs. */
  std::optional<double> epsilon;
  std::optional<double> noise;      /* the drawn bound inflation L */
  std::optional<double> noise_rate; /* rate of its exponential law */
};

/* Core decision loop over a raw satisfaction-bit stream. `bound_noise`
 * inflates both stopping bounds symmetrically (0 for the plain test); a run
 * that exhausts the cap reports Undecided. Templated so tight callers
 * (audits, benchmarks) pay no call-through-std::function cost. */
template <typename NextBit>
SprtState run_sprt_core(const SprtConfig& config, double bound_noise,
                        NextBit&& next_bit, Outcome& outcome) {
  const double bound = decision_bound(config) + bound_noise;
  SprtState state = SprtState::fresh(config);
  while (state.draws < config.cap) {
    state.update(next_bit());
    if (state.log_ratio >= bound) {
      outcome = Outcome::kNull;
      return state;
    }
    if (state.log_ratio <= -bound) {
      outcome = Outcome::kAlt;
      return state;
    }
  }
  outcome = Outcome::kUndecided;
  return state;
}

/* Plain (non-private) sequential test over a bit stream. The seed is only
 * echoed into the record. */
RunRecord run_sprt_bits(const SprtConfig& config,
                        const std::function<bool()>& next_bit,
                        std::uint64_t seed = 0);

/* Plain sequential test fed by satisfaction bits of `formula` on signals
 * drawn from `source`. */
RunRecord run_sprt(SampleSource& source, const Formula& formula,
                   const SprtConfig& config, Rng& rng);

/* Largest success count that keeps the log-ratio below the decision bound:
 * the unique K1 with K1 * up < B <= (K1 + 1) * up. */
std::uint64_t k1_threshold(const SprtConfig& config);

/* Witness that the plain test's stopping time has unbounded sensitivity:
 * two bit scripts differing in exactly one position (flip_index), where the
 * first decides Null after k1 + 1 draws and the second oscillates inside the
 * bounds forever. Requires a symmetric test (threshold 1/2); the zero-drift
 * oscillation does not exist otherwise. */
struct CounterexamplePair {
  std::function<bool(std::uint64_t)> deciding;
  std::function<bool(std::uint64_t)> oscillating;
  std::uint64_t flip_index = 0;
};

CounterexamplePair counterexample_pair(const SprtConfig& config);

}  // namespace smcedp
