#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace smcedp {

/* A finite, uniformly sampled multivariate signal.
 *
 * Sample k lives at time k * sample_period(); the horizon T is the time of
 * the last sample. Channels are addressed by name ("x0", "x1", ..., or a
 * domain name such as "e"); when no names are given they default to
 * x0..x{d-1}. */
class Signal {
 public:
  Signal(std::vector<std::string> channels, double sample_period,
         std::vector<std::vector<double>> samples);
  Signal(double sample_period, std::vector<std::vector<double>> samples);

  std::size_t dimension() const { return channels_.size(); }
  double sample_period() const { return sample_period_; }
  std::size_t sample_count() const { return samples_.size(); }
  double horizon() const {
    return static_cast<double>(sample_count() - 1) * sample_period_;
  }

  const std::vector<std::string>& channels() const { return channels_; }

  /* Index of a named channel; throws DomainError if absent. */
  std::size_t channel_index(std::string_view name) const;

  double value(std::size_t step, std::size_t channel) const {
    return samples_[step][channel];
  }
  const std::vector<double>& at(std::size_t step) const {
    return samples_[step];
  }

  /* Nearest grid index for time t: any point within half a period of a
   * grid point snaps to it (so 1.0000000001 with dt = 0.5 snaps to step 2).
   * Rejects negative times. */
  std::size_t snap_to_grid(double t) const;

  /* Suffix starting at time t, which must be a grid multiple within
   * [0, horizon]: the signal sigma_t with sigma_t(u) = sigma(t + u). */
  Signal shifted(double t) const;

 private:
  void validate() const;

  std::vector<std::string> channels_;
  double sample_period_;
  std::vector<std::vector<double>> samples_;
};

}  // namespace smcedp
