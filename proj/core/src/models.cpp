#include "smcedp/models.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "number_format.hpp"
#include "smcedp/csv.hpp"
#include "smcedp/errors.hpp"
#include "smcedp/parser.hpp"

namespace smcedp {

namespace {

constexpr std::uint64_t kReplayShuffleStream = 0x7265706c61790000ull;

Signal one_step(const char* channel, double value) {
  return Signal({channel}, 1.0, {{value}});
}

}  // namespace

BernoulliOracle::BernoulliOracle(double satisfaction_probability)
    : p_(satisfaction_probability) {
  if (!(p_ >= 0.0 && p_ <= 1.0)) {
    throw DomainError("Bernoulli satisfaction probability must lie in [0, 1]");
  }
}

Signal BernoulliOracle::next(Rng& rng) {
  return one_step("x0", rng.bernoulli(p_) ? 1.0 : -1.0);
}

Formula BernoulliOracle::reference_formula() {
  return Formula::atom({AtomTerm{"x0", 1.0}}, 0.0);
}

Signal UniformOracle::next(Rng& rng) {
  return one_step("x0", rng.uniform01());
}

std::string to_string(Decision decision) {
  switch (decision) {
    case Decision::kRight:
      return "right";
    case Decision::kStraight:
      return "straight";
    case Decision::kLeft:
      return "left";
  }
  throw DomainError("unknown decision label");
}

TrafficSurrogate::TrafficSurrogate(double v_lim, double sigma_v,
                                   double horizon, double sample_period)
    : v_lim_(v_lim),
      sigma_v_(sigma_v),
      horizon_(horizon),
      sample_period_(sample_period) {
  if (!(v_lim_ > 0.0)) throw DomainError("speed limit must be positive");
  if (!(sigma_v_ > 0.0)) throw DomainError("speed deviation must be positive");
  if (!(sample_period_ > 0.0) || !(horizon_ >= 0.0)) {
    throw DomainError("horizon and sample period must be positive");
  }
  const double steps = horizon_ / sample_period_;
  if (std::abs(steps - std::round(steps)) > 1e-6) {
    throw DomainError("horizon must be a multiple of the sample period");
  }
}

Signal TrafficSurrogate::next(Rng& rng) {
  const double v = rng.gaussian(v_lim_, sigma_v_);
  const double e = (v - v_lim_) / v_lim_;
  const auto steps =
      static_cast<std::size_t>(std::round(horizon_ / sample_period_));
  std::vector<std::vector<double>> samples(steps + 1,
                                           std::vector<double>{e});
  return Signal({"e"}, sample_period_, std::move(samples));
}

TrafficSurrogate TrafficSurrogate::for_decision(Decision decision) {
  switch (decision) {
    case Decision::kRight:
      return TrafficSurrogate(13.0, 3.0, 240.0, 1.0);
    case Decision::kStraight:
      return TrafficSurrogate(50.0, 10.0, 240.0, 1.0);
    case Decision::kLeft:
      return TrafficSurrogate(15.0, 5.0, 240.0, 1.0);
  }
  throw DomainError("unknown decision label");
}

double TrafficSurrogate::satisfaction_probability() const {
  /* |e| < 0.2 iff |Z| < 0.2 * v_lim / sigma_v for Z standard normal. */
  const double c = 0.2 * v_lim_ / sigma_v_;
  return std::erf(c / std::sqrt(2.0));
}

Formula TrafficSurrogate::property() const {
  const std::string text = "F[0," + detail::format_double(horizon_) +
                           "] ((e < 0.2) & (e > -0.2))";
  return parse_formula(text);
}

TraceReplaySource::TraceReplaySource(const std::filesystem::path& directory,
                                     std::uint64_t seed) {
  std::error_code ec;
  std::filesystem::directory_iterator it(directory, ec);
  if (ec) {
    throw SourceError("cannot read trace directory " + directory.string() +
                      ": " + ec.message());
  }
  for (const auto& entry : it) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      order_.push_back(entry.path());
    }
  }
  /* Directory iteration order is unspecified; sort before shuffling so the
   * seed alone fixes the replay order. */
  std::sort(order_.begin(), order_.end());
  Rng rng(seed, {kReplayShuffleStream});
  for (std::size_t i = order_.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.next_u64() % i);
    std::swap(order_[i - 1], order_[j]);
  }
}

Signal TraceReplaySource::next(Rng&) {
  if (cursor_ >= order_.size()) {
    throw SourceError("trace pool exhausted after " +
                      std::to_string(order_.size()) + " replays");
  }
  return read_signal_csv(order_[cursor_++]);
}

Signal TraceReplaySource::at(std::size_t index) const {
  if (index >= order_.size()) {
    throw SourceError("replay index " + std::to_string(index) +
                      " out of range (pool holds " +
                      std::to_string(order_.size()) + " traces)");
  }
  return read_signal_csv(order_[index]);
}

ScriptedSource::ScriptedSource(std::function<bool(std::uint64_t)> script)
    : script_(std::move(script)) {
  if (!script_) throw DomainError("scripted source requires a script");
}

Signal ScriptedSource::next(Rng&) {
  return one_step("x0", script_(cursor_++) ? 1.0 : -1.0);
}

}  // namespace smcedp
