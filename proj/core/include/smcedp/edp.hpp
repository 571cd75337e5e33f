#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "smcedp/sprt.hpp"

namespace smcedp {

/* Privatized sequential test: identical to the plain SPRT except that each
 * run inflates both stopping bounds by one exponential draw L, which makes
 * the stopping time (and hence the decision) expectedly differentially
 * private in the satisfaction bits at privacy level epsilon. */
struct EdpConfig {
  SprtConfig base;
  double epsilon = 0.05;

  void validate() const; /* base checks plus epsilon > 0 */
};

/* Rate of the bound-inflation noise: epsilon / (up + down), so that one
 * flipped bit (worth at most up + down of log-ratio) costs at most epsilon
 * of privacy budget in expectation. */
double noise_rate(const EdpConfig& config);

struct NoiseDraw {
  double value = 0.0; /* L >= 0 */
  double rate = 0.0;  /* rate it was drawn at */
};

/* One fresh exponential bound inflation. */
NoiseDraw sample_noise(const EdpConfig& config, Rng& rng);

/* Deterministic inverse-CDF form: the L produced from a given uniform in
 * (0, 1]. Exposed so tests can pin the mapping. */
NoiseDraw noise_from_uniform(const EdpConfig& config, double uniform);

/* Privatized test over a raw bit stream with the bound inflation supplied
 * by the caller (audits sweep it; pass 0 to reproduce the plain test). */
RunRecord run_edp_bits(const EdpConfig& config, double noise,
                       const std::function<bool()>& next_bit,
                       std::uint64_t seed = 0);

/* Privatized test end to end: draws L from a child stream of `rng` (so the
 * trace draws consume exactly the stream run_sprt would see), then runs the
 * inflated-bound test on satisfaction bits of `formula` over `source`. */
RunRecord run_edp(SampleSource& source, const Formula& formula,
                  const EdpConfig& config, Rng& rng);

/* Expected per-draw log-ratio drift D = p_phi * up - (1 - p_phi) * down
 * when satisfaction bits are i.i.d. Bernoulli(p_phi). */
double average_step(const SprtConfig& config, double satisfaction_probability);

/* Wald approximation of the expected stopping time of a test with upper
 * bound `upper`, lower bound -`lower` and drift `drift`:
 *
 *   drift > 0:  (upper * (1 - e^-lower) - lower * e^-lower) / drift
 *   drift < 0:  mirror image.
 *
 * Zero drift is outside the approximation's domain and raises DomainError. */
double expected_termination(double upper, double lower, double drift);

/* Expected-sensitivity of the stopping time to one flipped bit,
 * (up + down) / |drift|; raises DomainError at zero drift. */
double expected_sensitivity(const SprtConfig& config,
                            double satisfaction_probability);

/* Reference exponential mechanism over a finite stopping-time support:
 * P(k) proportional to exp(-epsilon * |k - tau| / sensitivity). Yardstick
 * for the privacy level the randomized bounds achieve; any two taus at most
 * `sensitivity` apart give pointwise ratios within e^(2 * epsilon). */
std::map<std::uint64_t, double> exponential_mechanism_pmf(
    std::uint64_t tau, double sensitivity, double epsilon,
    const std::vector<std::uint64_t>& support);

}  // namespace smcedp
