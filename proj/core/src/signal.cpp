#include "smcedp/signal.hpp"

#include <cmath>
#include <utility>

#include "smcedp/errors.hpp"

namespace smcedp {

namespace {

std::vector<std::string> default_channels(std::size_t dimension) {
  std::vector<std::string> names;
  names.reserve(dimension);
  for (std::size_t i = 0; i < dimension; ++i) {
    names.push_back("x" + std::to_string(i));
  }
  return names;
}

}  // namespace

Signal::Signal(std::vector<std::string> channels, double sample_period,
               std::vector<std::vector<double>> samples)
    : channels_(std::move(channels)),
      sample_period_(sample_period),
      samples_(std::move(samples)) {
  validate();
}

/* Members initialize in declaration order, so channels_ reads the sample
 * width before samples_ moves the rows out. */
Signal::Signal(double sample_period, std::vector<std::vector<double>> samples)
    : channels_(default_channels(samples.empty() ? 0 : samples.front().size())),
      sample_period_(sample_period),
      samples_(std::move(samples)) {
  validate();
}

void Signal::validate() const {
  if (!(sample_period_ > 0.0)) {
    throw DomainError("signal sample period must be positive");
  }
  if (samples_.empty()) {
    throw DomainError("signal must contain at least one sample");
  }
  for (const auto& row : samples_) {
    if (row.size() != channels_.size()) {
      throw DomainError("signal sample width does not match channel count");
    }
  }
}

std::size_t Signal::channel_index(std::string_view name) const {
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    if (channels_[i] == name) return i;
  }
  throw DomainError("signal has no channel named '" + std::string(name) + "'");
}

std::size_t Signal::snap_to_grid(double t) const {
  const double steps = t / sample_period_;
  const double rounded = std::round(steps);
  if (rounded < 0.0) {
    throw DomainError("time point " + std::to_string(t) + " is negative");
  }
  return static_cast<std::size_t>(rounded);
}

Signal Signal::shifted(double t) const {
  const double steps = t / sample_period_;
  const double rounded = std::round(steps);
  if (rounded < 0.0 || std::abs(steps - rounded) > 1e-6) {
    throw DomainError("shift origin " + std::to_string(t) +
                      " is not a nonnegative multiple of the sample period");
  }
  const auto start = static_cast<std::size_t>(rounded);
  if (start >= sample_count()) {
    throw DomainError("shift origin " + std::to_string(t) +
                      " lies beyond the signal horizon");
  }
  std::vector<std::vector<double>> rest(samples_.begin() + start,
                                        samples_.end());
  return Signal(channels_, sample_period_, std::move(rest));
}

}  // namespace smcedp
