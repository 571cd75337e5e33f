#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smcedp/edp.hpp"

namespace smcedp {

/* Empirical privacy audit of the randomized-bound test.
 *
 * Two adjacent bit-stream distributions are compared: both draw i.i.d.
 * Bernoulli(bit_probability) satisfaction bits, but the bit at flip_index is
 * pinned to 1 in one class and 0 in the other. For each of noise_samples
 * fixed bound inflations L, each class runs `pairs` tests with common random
 * numbers (cell (l, j) reuses one stream in both classes) and records the
 * average termination time ATT. The two ATT populations are histogrammed on
 * a shared grid; if the test is expectedly private at level epsilon, the
 * per-bin mass ratios stay within e^(2 * epsilon) up to sampling slack. */
struct AuditConfig {
  EdpConfig edp;
  double bit_probability = 0.75; /* p_phi of the unpinned positions */
  std::uint64_t flip_index = 0;  /* position where the classes differ */
  std::uint64_t pairs = 500;     /* M: runs averaged into one ATT */
  std::uint64_t noise_samples = 10000; /* number of audited L draws */
  double bin_width = 130.0;
  double min_expected_count = 5.0; /* both classes must clear this */
  double slack = 1.25;             /* multiplicative tolerance on the bound */
  std::uint64_t seed = 0;
  int jobs = 1;

  void validate() const;
};

/* Fraction of outcomes equal to `truth` (which must be Null or Alt);
 * raises DomainError on an empty list. */
double accuracy(const std::vector<Outcome>& outcomes, Outcome truth);

/* Average termination time of one audit cell column: `pairs` privatized
 * runs at fixed bound inflation `noise`, with the flipped bit set to
 * `flip_value`. noise_index selects the common-random-number streams, so
 * calls with the two flip values and the same index are coupled. */
double att(const AuditConfig& config, bool flip_value, double noise,
           std::uint64_t noise_index);

struct HistogramBin {
  double lower = 0.0;
  double upper = 0.0;
  std::uint64_t count_flip1 = 0;
  std::uint64_t count_flip0 = 0;
  double mass_flip1 = 0.0;
  double mass_flip0 = 0.0;
  double ratio = 0.0; /* mass_flip1 / mass_flip0 when qualifying, else 0 */
  bool qualifies = false;
};

struct AuditReport {
  AuditConfig config;
  std::vector<double> noise_values; /* the audited L draws, in index order */
  std::vector<double> att_flip1;
  std::vector<double> att_flip0;
  std::vector<HistogramBin> bins;
  double max_ratio = 1.0; /* max over qualifying bins of max(r, 1/r) */
  double bound = 0.0;     /* e^(2 * epsilon) * slack */
  bool pass = false;
  /* True when the comparison carries little evidence: no qualifying bins,
   * or one class concentrated in a single bin. Informational, not a
   * failure. */
  bool degenerate = false;
  double accuracy = 0.0; /* outcomes vs. the side bit_probability is on */
  double mean_tau = 0.0;
  std::uint64_t cap_hits = 0;
};

AuditReport run_audit(const AuditConfig& config);

/* Serialized forms; all byte-stable for a fixed config. */
std::string to_json(const AuditReport& report);
std::string histogram_to_csv(const AuditReport& report);
std::string att_samples_to_csv(const AuditReport& report);

/* Human-readable summary with a side-by-side ASCII rendering of the two
 * ATT histograms. */
std::string render_audit_summary(const AuditReport& report);

}  // namespace smcedp
