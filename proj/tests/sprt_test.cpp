#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "smcedp/errors.hpp"
#include "smcedp/models.hpp"
#include "smcedp/rng.hpp"
#include "smcedp/sprt.hpp"

namespace smcedp {
namespace {

SprtConfig make_config(double threshold, double indifference, double alpha,
                       std::uint64_t cap = 1000000) {
  SprtConfig config;
  config.threshold = threshold;
  config.indifference = indifference;
  config.alpha = alpha;
  config.cap = cap;
  return config;
}

std::function<bool()> scripted_bits(std::function<bool(std::uint64_t)> script) {
  auto cursor = std::make_shared<std::uint64_t>(0);
  return [cursor, script = std::move(script)] { return script((*cursor)++); };
}

TEST(SprtConfigTest, Validation) {
  EXPECT_NO_THROW(make_config(0.5, 0.05, 0.05).validate());
  EXPECT_THROW(make_config(0.5, 0.0, 0.05).validate(), ConfigError);
  EXPECT_THROW(make_config(0.5, -0.1, 0.05).validate(), ConfigError);
  EXPECT_THROW(make_config(0.05, 0.05, 0.05).validate(), ConfigError);
  EXPECT_THROW(make_config(0.95, 0.05, 0.05).validate(), ConfigError);
  EXPECT_THROW(make_config(0.5, 0.05, 0.0).validate(), ConfigError);
  EXPECT_THROW(make_config(0.5, 0.05, 0.5).validate(), ConfigError);
  EXPECT_THROW(make_config(0.5, 0.05, 1.2).validate(), ConfigError);
  EXPECT_THROW(make_config(0.5, 0.05, 0.05, 0).validate(), ConfigError);
}

TEST(SprtMathTest, StepSizes) {
  /* Symmetric case: both steps equal ln(0.6 / 0.4) = ln(1.5). */
  const StepSizes symmetric = step_sizes(make_config(0.5, 0.1, 0.01));
  EXPECT_NEAR(symmetric.up, 0.40546510810816438, 1e-15);
  EXPECT_NEAR(symmetric.down, 0.40546510810816438, 1e-15);
  /* Asymmetric: up = ln(0.8/0.6) = ln(4/3), down = ln(0.4/0.2) = ln(2). */
  const StepSizes skewed = step_sizes(make_config(0.7, 0.1, 0.01));
  EXPECT_NEAR(skewed.up, 0.28768207245178085, 1e-15);
  EXPECT_NEAR(skewed.down, 0.69314718055994531, 1e-15);
}

TEST(SprtMathTest, DecisionBound) {
  EXPECT_NEAR(decision_bound(make_config(0.5, 0.1, 0.01)),
              4.5951198501345899, 1e-13); /* ln(99) */
  EXPECT_NEAR(decision_bound(make_config(0.5, 0.1, 0.05)),
              2.9444389791664405, 1e-13); /* ln(19) */
}

TEST(SprtMathTest, LikelihoodRatio) {
  const SprtConfig config = make_config(0.5, 0.1, 0.01);
  EXPECT_DOUBLE_EQ(likelihood_ratio(config, 0, 0), 1.0);
  /* K = 3 of N = 5 at the symmetric test: (1.5)^(2K - N) = 1.5. */
  EXPECT_NEAR(likelihood_ratio(config, 3, 5), 1.5, 1e-12);
  EXPECT_NEAR(likelihood_ratio(config, 1, 5), 1.0 / 1.5 / 1.5 / 1.5, 1e-12);
  EXPECT_THROW(likelihood_ratio(config, 6, 5), DomainError);
}

TEST(SprtRunTest, ConstantStreamsDecideAtTheWaldTime) {
  /* ceil(ln(99) / ln(1.5)) = 12 */
  const SprtConfig config = make_config(0.5, 0.1, 0.01);
  const RunRecord null_run =
      run_sprt_bits(config, scripted_bits([](std::uint64_t) { return true; }));
  EXPECT_EQ(null_run.outcome, Outcome::kNull);
  EXPECT_EQ(null_run.tau, 12u);
  EXPECT_EQ(null_run.successes, 12u);
  EXPECT_EQ(null_run.algorithm, "sprt-deterministic");
  EXPECT_FALSE(null_run.epsilon.has_value());
  EXPECT_FALSE(null_run.noise.has_value());

  const RunRecord alt_run =
      run_sprt_bits(config, scripted_bits([](std::uint64_t) { return false; }));
  EXPECT_EQ(alt_run.outcome, Outcome::kAlt);
  EXPECT_EQ(alt_run.tau, 12u);
  EXPECT_EQ(alt_run.successes, 0u);

  /* Asymmetric steps stop at different times per side:
   * ceil(ln(19)/ln(4/3)) = 11 up, ceil(ln(19)/ln(2)) = 5 down. */
  const SprtConfig skewed = make_config(0.7, 0.1, 0.05);
  EXPECT_EQ(
      run_sprt_bits(skewed, scripted_bits([](std::uint64_t) { return true; }))
          .tau,
      11u);
  EXPECT_EQ(
      run_sprt_bits(skewed, scripted_bits([](std::uint64_t) { return false; }))
          .tau,
      5u);
}

TEST(SprtRunTest, ExactBoundHitStops) {
  /* Inflate the bound to exactly two up-steps: the second satisfying draw
   * lands the log-ratio precisely on the bound, and ties stop. */
  const SprtConfig config = make_config(0.5, 0.1, 0.01);
  const StepSizes steps = step_sizes(config);
  const double noise = 2.0 * steps.up - decision_bound(config);
  auto ones = scripted_bits([](std::uint64_t) { return true; });
  Outcome outcome = Outcome::kUndecided;
  const SprtState state = run_sprt_core(config, noise, ones, outcome);
  EXPECT_EQ(outcome, Outcome::kNull);
  EXPECT_EQ(state.draws, 2u);

  auto zeros = scripted_bits([](std::uint64_t) { return false; });
  outcome = Outcome::kUndecided;
  const SprtState mirrored = run_sprt_core(config, noise, zeros, outcome);
  EXPECT_EQ(outcome, Outcome::kAlt);
  EXPECT_EQ(mirrored.draws, 2u);
}

TEST(SprtRunTest, CapExhaustionReportsUndecided) {
  const SprtConfig config = make_config(0.5, 0.1, 0.01, 25);
  const RunRecord record = run_sprt_bits(
      config, scripted_bits([](std::uint64_t i) { return i % 2 == 0; }));
  EXPECT_EQ(record.outcome, Outcome::kUndecided);
  EXPECT_EQ(record.tau, 25u);
  EXPECT_EQ(record.successes, 13u);
}

TEST(SprtRunTest, FinalLogRatioMatchesClosedForm) {
  const SprtConfig config = make_config(0.6, 0.05, 0.05);
  BernoulliOracle oracle(0.7);
  Rng rng(2024, {17});
  const RunRecord record = run_sprt(
      oracle, BernoulliOracle::reference_formula(), config, rng);
  EXPECT_EQ(record.seed, 2024u);
  EXPECT_NE(record.outcome, Outcome::kUndecided);
  EXPECT_NEAR(std::exp(record.final_log_ratio),
              likelihood_ratio(config, record.successes, record.tau), 1e-9);
}

TEST(SprtRunTest, ErrorProbabilityStaysNearAlpha) {
  /* At p_phi = p + delta the Alt probability is bounded by alpha; allow
   * three binomial sigmas of slack at this sample size. */
  const SprtConfig config = make_config(0.5, 0.05, 0.05);
  BernoulliOracle oracle(0.55);
  const Formula formula = BernoulliOracle::reference_formula();
  std::size_t wrong = 0;
  const std::size_t reps = 500;
  for (std::size_t i = 0; i < reps; ++i) {
    Rng rng(515, {1, i});
    const RunRecord record = run_sprt(oracle, formula, config, rng);
    ASSERT_NE(record.outcome, Outcome::kUndecided);
    wrong += record.outcome == Outcome::kAlt;
  }
  EXPECT_LE(static_cast<double>(wrong) / reps, 0.08);
}

TEST(K1Test, KnownValues) {
  EXPECT_EQ(k1_threshold(make_config(0.5, 0.1, 0.01)), 11u);
  EXPECT_EQ(k1_threshold(make_config(0.5, 0.3, 0.05)), 2u);
  /* Nearly even odds: the bound is smaller than one step. */
  EXPECT_EQ(k1_threshold(make_config(0.5, 0.1, 0.4999)), 0u);
}

TEST(K1Test, DefiningInequalityHoldsAcrossConfigs) {
  const double thresholds[] = {0.3, 0.5, 0.64, 0.8};
  const double widths[] = {0.01, 0.05, 0.1};
  const double alphas[] = {0.001, 0.01, 0.05, 0.2, 0.4999};
  for (double p : thresholds) {
    for (double d : widths) {
      for (double a : alphas) {
        const SprtConfig config = make_config(p, d, a);
        const std::uint64_t k1 = k1_threshold(config);
        const double up = step_sizes(config).up;
        const double bound = decision_bound(config);
        EXPECT_LT(static_cast<double>(k1) * up, bound)
            << "p=" << p << " d=" << d << " a=" << a;
        EXPECT_GE(static_cast<double>(k1 + 1) * up, bound)
            << "p=" << p << " d=" << d << " a=" << a;
      }
    }
  }
}

TEST(CounterexampleTest, AdjacentScriptsDiverge) {
  const SprtConfig base = make_config(0.5, 0.1, 0.01);
  const CounterexamplePair pair = counterexample_pair(base);
  EXPECT_EQ(pair.flip_index, 11u);
  /* The scripts agree everywhere except flip_index. */
  for (std::uint64_t i = 0; i < 100; ++i) {
    if (i == pair.flip_index) {
      EXPECT_NE(pair.deciding(i), pair.oscillating(i));
    } else {
      EXPECT_EQ(pair.deciding(i), pair.oscillating(i)) << i;
    }
  }
  /* One decides immediately; the other runs to whatever cap is imposed. */
  for (std::uint64_t cap : {200u, 1000u, 5000u}) {
    SprtConfig config = base;
    config.cap = cap;
    const RunRecord deciding =
        run_sprt_bits(config, scripted_bits(pair.deciding));
    EXPECT_EQ(deciding.outcome, Outcome::kNull);
    EXPECT_EQ(deciding.tau, 12u);
    const RunRecord oscillating =
        run_sprt_bits(config, scripted_bits(pair.oscillating));
    EXPECT_EQ(oscillating.outcome, Outcome::kUndecided);
    EXPECT_EQ(oscillating.tau, cap);
  }
}

TEST(CounterexampleTest, RequiresSymmetricTestWithRoomToOscillate) {
  EXPECT_THROW(counterexample_pair(make_config(0.6, 0.1, 0.01)), DomainError);
  /* Bound below one step: the flipped script would cross -B. */
  EXPECT_THROW(counterexample_pair(make_config(0.5, 0.1, 0.4999)),
               DomainError);
}

TEST(OutcomeTest, Labels) {
  EXPECT_EQ(to_string(Outcome::kNull), "null");
  EXPECT_EQ(to_string(Outcome::kAlt), "alt");
  EXPECT_EQ(to_string(Outcome::kUndecided), "undecided");
}

}  // namespace
}  // namespace smcedp
