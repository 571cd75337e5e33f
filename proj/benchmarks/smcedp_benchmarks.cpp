/* Microbenchmarks for the hot paths: formula parsing, trace monitoring,
 * sequential testing and the Rademacher estimator. */

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "smcedp/edp.hpp"
#include "smcedp/models.hpp"
#include "smcedp/parametrized.hpp"
#include "smcedp/parser.hpp"
#include "smcedp/rng.hpp"
#include "smcedp/sprt.hpp"

namespace {

using namespace smcedp;

void BM_ParseFormula(benchmark::State& state) {
  const std::string text =
      "G[0,60] ((x0 >= 0.5 | x1 < 0.2) U[0,10] (2*x0 - x1 + 0.25 >= 1))";
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_formula(text));
  }
}
BENCHMARK(BM_ParseFormula);

void BM_MonitorTrafficProperty(benchmark::State& state) {
  TrafficSurrogate surrogate = TrafficSurrogate::for_decision(Decision::kLeft);
  const Formula property = surrogate.property();
  Rng rng(1);
  const Signal trace = surrogate.next(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(satisfies(property, trace));
  }
}
BENCHMARK(BM_MonitorTrafficProperty);

void BM_MonitorNestedUntil(benchmark::State& state) {
  const auto samples = static_cast<std::size_t>(state.range(0));
  std::vector<std::vector<double>> rows(samples);
  Rng rng(2);
  for (auto& row : rows) {
    row = {rng.uniform01() - 0.3, rng.uniform01() - 0.7};
  }
  const Signal signal(1.0, std::move(rows));
  const Formula formula =
      parse_formula("G[0,inf] F[0,20] (x0 >= 0 & x1 < 0.5)");
  for (auto _ : state) {
    benchmark::DoNotOptimize(satisfies(formula, signal));
  }
}
BENCHMARK(BM_MonitorNestedUntil)->Arg(64)->Arg(256);

void BM_SprtRun(benchmark::State& state) {
  SprtConfig config;
  config.threshold = 0.5;
  config.indifference = 0.01;
  config.alpha = 0.01;
  std::uint64_t stream = 0;
  for (auto _ : state) {
    Rng rng(3, {stream++});
    std::function<bool()> bits = [&rng]() mutable {
      return rng.bernoulli(0.64);
    };
    benchmark::DoNotOptimize(run_sprt_bits(config, bits).tau);
  }
}
BENCHMARK(BM_SprtRun);

void BM_EdpRun(benchmark::State& state) {
  EdpConfig config;
  config.base.threshold = 0.5;
  config.base.indifference = 0.03;
  config.base.alpha = 0.01;
  config.epsilon = 0.05;
  BernoulliOracle oracle(0.64);
  const Formula formula = BernoulliOracle::reference_formula();
  std::uint64_t stream = 0;
  for (auto _ : state) {
    Rng rng(4, {stream++});
    benchmark::DoNotOptimize(run_edp(oracle, formula, config, rng).tau);
  }
}
BENCHMARK(BM_EdpRun);

void BM_RademacherAverage(benchmark::State& state) {
  const auto samples = static_cast<std::size_t>(state.range(0));
  SatisfactionMatrix matrix(8);
  Rng bits(5);
  for (std::size_t i = 0; i < samples; ++i) {
    std::vector<bool> column(8);
    for (std::size_t m = 0; m < 8; ++m) column[m] = bits.bernoulli(0.7);
    matrix.append(column);
  }
  Rng rng(6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rademacher_average(matrix, 200, rng));
  }
}
BENCHMARK(BM_RademacherAverage)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
