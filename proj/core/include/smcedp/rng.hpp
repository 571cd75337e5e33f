#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace smcedp {

/* Deterministic random source with named sub-streams.
 *
 * A root seed plus a list of stream ids is folded (splitmix64-style) into a
 * single 64-bit key that seeds a mt19937_64 engine. The engine's output
 * sequence is fixed by the C++ standard, and all value mappings below are
 * implemented by hand, so two builds given the same (seed, stream) produce
 * bitwise-identical draws regardless of platform or standard library.
 *
 * Sub-streams let independent units of work (repetition i, audit cell (l, j))
 * draw from non-overlapping sequences, which keeps results byte-stable under
 * any degree of parallelism. */
class Rng {
 public:
  /* Identifier recorded in run records; bump if any mapping changes. */
  static constexpr const char* kAlgorithm = "splitmix64+mt19937_64/v1";

  explicit Rng(std::uint64_t seed) : Rng(seed, {}) {}
  Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream);
  Rng(std::uint64_t seed, const std::vector<std::uint64_t>& stream);

  /* Child with an independent stream; the parent is not advanced. */
  Rng split(std::uint64_t stream_id) const;

  std::uint64_t next_u64();

  /* Uniform on [0, 1), 53-bit resolution. */
  double uniform01();

  /* Uniform on (0, 1]; safe as a log() argument. */
  double uniform01_positive();

  bool bernoulli(double p);

  /* Exponential with the given rate (mean 1/rate); rate must be > 0. */
  double exponential(double rate);

  /* Box-Muller normal draw. */
  double gaussian(double mean, double stddev);

  std::uint64_t root_seed() const { return root_seed_; }

 private:
  Rng(std::uint64_t root_seed, std::uint64_t key);

  std::uint64_t root_seed_;
  std::uint64_t key_;
  std::mt19937_64 engine_;
};

}  // namespace smcedp
