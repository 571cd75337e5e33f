#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "smcedp/edp.hpp"
#include "smcedp/errors.hpp"
#include "smcedp/models.hpp"
#include "smcedp/rng.hpp"

namespace smcedp {
namespace {

EdpConfig make_config(double threshold, double indifference, double alpha,
                      double epsilon, std::uint64_t cap = 1000000) {
  EdpConfig config;
  config.base.threshold = threshold;
  config.base.indifference = indifference;
  config.base.alpha = alpha;
  config.base.cap = cap;
  config.epsilon = epsilon;
  return config;
}

TEST(EdpConfigTest, Validation) {
  EXPECT_NO_THROW(make_config(0.5, 0.1, 0.01, 0.05).validate());
  EXPECT_THROW(make_config(0.5, 0.1, 0.01, 0.0).validate(), ConfigError);
  EXPECT_THROW(make_config(0.5, 0.1, 0.01, -1.0).validate(), ConfigError);
  /* base checks propagate */
  EXPECT_THROW(make_config(0.5, 0.0, 0.01, 0.05).validate(), ConfigError);
}

TEST(NoiseTest, RateIsEpsilonOverStepSum) {
  /* up + down = 2 ln(1.5); rate = 0.05 / that. */
  EXPECT_NEAR(noise_rate(make_config(0.5, 0.1, 0.01, 0.05)),
              0.061657586559410824, 1e-15);
  /* Rate scales linearly in epsilon. */
  EXPECT_NEAR(noise_rate(make_config(0.5, 0.1, 0.01, 0.10)),
              2.0 * 0.061657586559410824, 1e-15);
}

TEST(NoiseTest, InverseCdfMapping) {
  const EdpConfig config = make_config(0.5, 0.1, 0.01, 0.05);
  const double rate = noise_rate(config);
  EXPECT_DOUBLE_EQ(noise_from_uniform(config, 1.0).value, 0.0);
  /* u = e^-1 maps to the mean 1/rate. */
  EXPECT_NEAR(noise_from_uniform(config, std::exp(-1.0)).value, 1.0 / rate,
              1e-9);
  EXPECT_DOUBLE_EQ(noise_from_uniform(config, 0.5).rate, rate);
  EXPECT_THROW(noise_from_uniform(config, 0.0), DomainError);
  EXPECT_THROW(noise_from_uniform(config, 1.5), DomainError);
}

TEST(NoiseTest, SampleMeanMatchesRate) {
  const EdpConfig config = make_config(0.5, 0.1, 0.01, 0.05);
  const double rate = noise_rate(config);
  Rng rng(42, {6});
  double total = 0.0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    const NoiseDraw draw = sample_noise(config, rng);
    ASSERT_GE(draw.value, 0.0);
    ASSERT_EQ(draw.rate, rate);
    total += draw.value;
  }
  EXPECT_NEAR(total / draws, 1.0 / rate, 0.05 / rate);
}

TEST(EdpRunTest, ZeroNoiseReproducesThePlainTest) {
  const EdpConfig config = make_config(0.5, 0.1, 0.01, 0.05, 500);
  auto script = [](std::uint64_t i) { return i % 7 != 0; };
  std::uint64_t cursor1 = 0;
  const RunRecord plain = run_sprt_bits(
      config.base, [&] { return script(cursor1++); });
  std::uint64_t cursor2 = 0;
  const RunRecord privatized = run_edp_bits(
      config, 0.0, [&] { return script(cursor2++); });
  EXPECT_EQ(privatized.outcome, plain.outcome);
  EXPECT_EQ(privatized.tau, plain.tau);
  EXPECT_EQ(privatized.successes, plain.successes);
  EXPECT_EQ(privatized.algorithm, "sprt-edp");
  ASSERT_TRUE(privatized.epsilon.has_value());
  EXPECT_EQ(*privatized.epsilon, 0.05);
  ASSERT_TRUE(privatized.noise.has_value());
  EXPECT_EQ(*privatized.noise, 0.0);
  EXPECT_THROW(
      run_edp_bits(config, -0.1, [] { return true; }), DomainError);
}

TEST(EdpRunTest, InflatedBoundDelaysTheDecision) {
  /* All-satisfying stream: tau = ceil((B + L) / up). */
  const EdpConfig config = make_config(0.5, 0.1, 0.01, 0.05);
  const double up = step_sizes(config.base).up;
  const double bound = decision_bound(config.base);
  for (double noise : {0.0, 1.0, 4.0, 16.0}) {
    const RunRecord record =
        run_edp_bits(config, noise, [] { return true; });
    EXPECT_EQ(record.outcome, Outcome::kNull);
    EXPECT_EQ(record.tau,
              static_cast<std::uint64_t>(std::ceil((bound + noise) / up)));
  }
}

TEST(EdpRunTest, VanishingEpsilonBudgetlessLimitMatchesPlainRuns) {
  /* At enormous epsilon the drawn inflation is ~0 and, because the noise
   * comes from a child stream, the trace draws are identical: the
   * privatized run must reproduce the plain run exactly. */
  const EdpConfig config = make_config(0.5, 0.05, 0.05, 1e12);
  BernoulliOracle oracle(0.6);
  const Formula formula = BernoulliOracle::reference_formula();
  for (std::uint64_t i = 0; i < 50; ++i) {
    Rng plain_rng(77, {2, i});
    Rng edp_rng(77, {2, i});
    const RunRecord plain = run_sprt(oracle, formula, config.base, plain_rng);
    const RunRecord privatized = run_edp(oracle, formula, config, edp_rng);
    ASSERT_EQ(privatized.outcome, plain.outcome) << i;
    ASSERT_EQ(privatized.tau, plain.tau) << i;
    ASSERT_EQ(privatized.successes, plain.successes) << i;
  }
}

TEST(EdpRunTest, RecordCarriesTheDrawnNoise) {
  const EdpConfig config = make_config(0.5, 0.1, 0.01, 0.05);
  BernoulliOracle oracle(0.8);
  Rng rng(909, {5});
  Rng probe = rng.split(0x65647000006e7a65ull); /* run_edp's noise stream */
  const double expected_noise = probe.exponential(noise_rate(config));
  const RunRecord record =
      run_edp(oracle, BernoulliOracle::reference_formula(), config, rng);
  ASSERT_TRUE(record.noise.has_value());
  EXPECT_EQ(*record.noise, expected_noise);
  ASSERT_TRUE(record.noise_rate.has_value());
  EXPECT_EQ(*record.noise_rate, noise_rate(config));
}

TEST(DriftTest, AverageStep) {
  /* D = p_phi*up - (1-p_phi)*down; at (0.5, 0.05), p_phi = 0.75 this is
   * 0.5 * ln(0.55/0.45). */
  const SprtConfig config = make_config(0.5, 0.05, 0.05, 1.0).base;
  EXPECT_NEAR(average_step(config, 0.75), 0.10033534773107558, 1e-15);
  /* Symmetric test: drift is odd around p_phi = 1/2. */
  EXPECT_NEAR(average_step(config, 0.25), -0.10033534773107558, 1e-15);
  EXPECT_NEAR(average_step(config, 0.5), 0.0, 1e-15);
  EXPECT_THROW(average_step(config, -0.1), DomainError);
  EXPECT_THROW(average_step(config, 1.1), DomainError);
}

TEST(DriftTest, ExpectedTermination) {
  /* Frozen: upper = lower = ln(19), drift = 0.10033534773107558. */
  const double bound = 2.9444389791664405;
  EXPECT_NEAR(expected_termination(bound, bound, 0.10033534773107558),
              26.25692832651714, 1e-10);
  /* Mirror symmetry for the negative-drift branch. */
  EXPECT_NEAR(expected_termination(bound, bound, -0.10033534773107558),
              26.25692832651714, 1e-10);
  /* Asymmetric bounds break the symmetry the right way: raising only the
   * far bound changes little, raising the near bound roughly doubles. */
  const double base = expected_termination(bound, bound, 0.1);
  EXPECT_GT(expected_termination(2.0 * bound, bound, 0.1), 1.9 * base);
  EXPECT_GT(expected_termination(bound, 2.0 * bound, 0.1), base);
  EXPECT_LT(expected_termination(bound, 2.0 * bound, 0.1), 1.2 * base);
  EXPECT_THROW(expected_termination(bound, bound, 0.0), DomainError);
  EXPECT_THROW(expected_termination(0.0, bound, 0.1), DomainError);
  EXPECT_THROW(expected_termination(bound, -1.0, 0.1), DomainError);
}

TEST(DriftTest, ExpectedTerminationTracksMonteCarlo) {
  /* Small-scale version of the formula-vs-simulation comparison; the
   * acceptance suite runs 5000 runs per triple. */
  const SprtConfig config = make_config(0.5, 0.01, 0.01, 1.0).base;
  const double p_phi = 0.64;
  const double bound = decision_bound(config);
  const double predicted =
      expected_termination(bound, bound, average_step(config, p_phi));
  BernoulliOracle oracle(p_phi);
  const Formula formula = BernoulliOracle::reference_formula();
  double total = 0.0;
  const std::size_t reps = 1000;
  for (std::size_t i = 0; i < reps; ++i) {
    Rng rng(7000, {3, i});
    total += static_cast<double>(run_sprt(oracle, formula, config, rng).tau);
  }
  const double mean = total / static_cast<double>(reps);
  EXPECT_NEAR(mean, predicted, 0.15 * mean);
}

TEST(SensitivityTest, ExpectedSensitivity) {
  /* (up + down) / |D|; symmetric at p = 1/2 so it collapses to
   * 2 / |2 p_phi - 1|. */
  const SprtConfig config = make_config(0.5, 0.05, 0.05, 1.0).base;
  EXPECT_NEAR(expected_sensitivity(config, 0.75), 4.0, 1e-12);
  EXPECT_NEAR(expected_sensitivity(config, 0.25), 4.0, 1e-12);
  const SprtConfig narrow = make_config(0.5, 0.01, 0.01, 1.0).base;
  EXPECT_NEAR(expected_sensitivity(narrow, 0.64), 2.0 / 0.28, 1e-12);
  EXPECT_THROW(expected_sensitivity(config, 0.5), DomainError);
}

TEST(MechanismTest, PmfShape) {
  std::vector<std::uint64_t> support;
  for (std::uint64_t k = 0; k <= 10; ++k) support.push_back(k);
  const auto pmf =
      exponential_mechanism_pmf(5, 1.0, std::log(2.0), support);
  double total = 0.0;
  for (const auto& [k, mass] : pmf) total += mass;
  EXPECT_NEAR(total, 1.0, 1e-12);
  /* Peak at tau, halving per unit distance at epsilon = ln 2. */
  EXPECT_NEAR(pmf.at(5) / pmf.at(6), 2.0, 1e-9);
  EXPECT_NEAR(pmf.at(5) / pmf.at(3), 4.0, 1e-9);
  EXPECT_NEAR(pmf.at(4), pmf.at(6), 1e-15);
}

TEST(MechanismTest, PointwiseRatioBound) {
  std::vector<std::uint64_t> support;
  for (std::uint64_t k = 0; k <= 50; ++k) support.push_back(k);
  const double epsilon = 0.1;
  const double sensitivity = 3.0;
  const double bound = std::exp(2.0 * epsilon) + 1e-12;
  for (std::uint64_t tau1 = 0; tau1 <= 50; ++tau1) {
    for (std::uint64_t tau2 = tau1;
         tau2 <= 50 && static_cast<double>(tau2 - tau1) <= sensitivity;
         ++tau2) {
      const auto pmf1 =
          exponential_mechanism_pmf(tau1, sensitivity, epsilon, support);
      const auto pmf2 =
          exponential_mechanism_pmf(tau2, sensitivity, epsilon, support);
      for (const std::uint64_t k : support) {
        const double ratio = pmf1.at(k) / pmf2.at(k);
        ASSERT_LE(ratio, bound);
        ASSERT_GE(ratio, 1.0 / bound);
      }
    }
  }
}

TEST(MechanismTest, ArgumentChecks) {
  const std::vector<std::uint64_t> support{1, 2, 3};
  EXPECT_THROW(exponential_mechanism_pmf(1, 1.0, 0.1, {}), DomainError);
  EXPECT_THROW(exponential_mechanism_pmf(1, 0.0, 0.1, support), DomainError);
  EXPECT_THROW(exponential_mechanism_pmf(1, 1.0, 0.0, support), DomainError);
}

}  // namespace
}  // namespace smcedp
