#include "smcedp/rng.hpp"

#include <cmath>
#include <numbers>

#include "smcedp/errors.hpp"

namespace smcedp {

namespace {

/* splitmix64 finalizer (Steele, Lea, Flood 2014). */
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t fold(std::uint64_t key, std::uint64_t stream_id) {
  return mix(key ^ mix(stream_id));
}

}  // namespace

Rng::Rng(std::uint64_t root_seed, std::uint64_t key)
    : root_seed_(root_seed), key_(key), engine_(key) {}

Rng::Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream)
    : Rng(seed, std::vector<std::uint64_t>(stream)) {}

Rng::Rng(std::uint64_t seed, const std::vector<std::uint64_t>& stream)
    : root_seed_(seed), key_(mix(seed)) {
  for (std::uint64_t id : stream) key_ = fold(key_, id);
  engine_.seed(key_);
}

Rng Rng::split(std::uint64_t stream_id) const {
  return Rng(root_seed_, fold(key_, stream_id));
}

std::uint64_t Rng::next_u64() { return engine_(); }

double Rng::uniform01() {
  /* Top 53 bits scaled by 2^-53: exactly representable, never reaches 1. */
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform01_positive() { return 1.0 - uniform01(); }

bool Rng::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("bernoulli probability must lie in [0, 1]");
  }
  return uniform01() < p;
}

double Rng::exponential(double rate) {
  if (!(rate > 0.0)) throw DomainError("exponential rate must be positive");
  return -std::log(uniform01_positive()) / rate;
}

double Rng::gaussian(double mean, double stddev) {
  const double u1 = uniform01_positive();
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * radius * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace smcedp
