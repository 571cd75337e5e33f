#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "smcedp/formula.hpp"
#include "smcedp/rng.hpp"
#include "smcedp/signal.hpp"

namespace smcedp {

/* A black box that emits i.i.d. signal samples on demand. Implementations
 * must be deterministic functions of the Rng they are handed: same stream,
 * same signals. */
class SampleSource {
 public:
  virtual ~SampleSource() = default;
  virtual Signal next(Rng& rng) = 0;
};

/* Single-step source whose reference atom 'x0 >= 0' holds with a known
 * probability: emits x0 = +1 with probability p and -1 otherwise. Handy
 * for calibrating and testing anything built on satisfaction bits. */
class BernoulliOracle : public SampleSource {
 public:
  explicit BernoulliOracle(double satisfaction_probability);

  Signal next(Rng& rng) override;

  double satisfaction_probability() const { return p_; }

  /* The atom this oracle is calibrated against. */
  static Formula reference_formula();

 private:
  double p_;
};

/* Single-step source with x0 uniform on [0, 1): the atom 'x0 < theta' holds
 * with probability exactly theta, which makes families of threshold atoms
 * with known member probabilities easy to construct. */
class UniformOracle : public SampleSource {
 public:
  Signal next(Rng& rng) override;
};

/* Per-decision regimes of the intersection-crossing case study. */
enum class Decision { kRight, kStraight, kLeft };

std::string to_string(Decision decision);

/* Surrogate for the vehicle-speed case study: each trace holds the relative
 * speed error e = (v - v_lim) / v_lim constant over a horizon of T seconds,
 * with one speed v ~ N(v_lim, sigma_v^2) drawn per trace. The property of
 * interest is F[0,T](|e| < 0.2), whose satisfaction probability has the
 * closed form P(|Z| < 0.2 * v_lim / sigma_v). */
class TrafficSurrogate : public SampleSource {
 public:
  TrafficSurrogate(double v_lim, double sigma_v, double horizon,
                   double sample_period);

  Signal next(Rng& rng) override;

  /* Case-study parameters for one decision (T = 240 s, dt = 1 s). */
  static TrafficSurrogate for_decision(Decision decision);

  /* Exact satisfaction probability of F[0,T](|e| < 0.2) under this model. */
  double satisfaction_probability() const;

  /* F[0,T]((e < 0.2) & (e > -0.2)) over the configured horizon. */
  Formula property() const;

  double v_lim() const { return v_lim_; }
  double sigma_v() const { return sigma_v_; }
  double horizon() const { return horizon_; }

 private:
  double v_lim_;
  double sigma_v_;
  double horizon_;
  double sample_period_;
};

/* Replays recorded CSV traces from a directory in a fixed shuffled order.
 * The order is determined once by the constructor seed; next() ignores its
 * Rng argument and raises SourceError when the pool is exhausted. */
class TraceReplaySource : public SampleSource {
 public:
  TraceReplaySource(const std::filesystem::path& directory,
                    std::uint64_t seed);

  Signal next(Rng& rng) override;

  /* Random access into the shuffled order (replay_next semantics). */
  Signal at(std::size_t index) const;

  std::size_t size() const { return order_.size(); }
  std::size_t consumed() const { return cursor_; }

 private:
  std::vector<std::filesystem::path> order_;
  std::size_t cursor_ = 0;
};

/* Deterministic source driven by a boolean script: step i emits a one-step
 * signal satisfying 'x0 >= 0' iff script(i). Used to feed hand-crafted
 * outcome sequences through the same code paths as live sources. */
class ScriptedSource : public SampleSource {
 public:
  explicit ScriptedSource(std::function<bool(std::uint64_t)> script);

  Signal next(Rng& rng) override;

  std::uint64_t consumed() const { return cursor_; }

 private:
  std::function<bool(std::uint64_t)> script_;
  std::uint64_t cursor_ = 0;
};

}  // namespace smcedp
