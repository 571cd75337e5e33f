#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "smcedp/formula.hpp"
#include "smcedp/models.hpp"
#include "smcedp/rng.hpp"
#include "smcedp/sprt.hpp"

namespace smcedp {

/* A finite, instantiated family of STL formulas.
 *
 * Families are usually produced from a textual template with positional
 * holes {0}, {1}, ... and a grid of parameter vectors, one member per row;
 * they can also be assembled directly from formulas. Every member is parsed
 * and validated up front. */
class Family {
 public:
  explicit Family(std::vector<Formula> members,
                  std::vector<std::string> labels = {});

  static Family from_template(const std::string& template_text,
                              const std::vector<std::vector<double>>& grid);

  /* Template from a text file plus a parameter grid from CSV (header
   * 'theta0,theta1,...', one member per row). */
  static Family load(const std::filesystem::path& template_file,
                     const std::filesystem::path& grid_csv);

  std::size_t size() const { return members_.size(); }
  const Formula& member(std::size_t index) const { return members_[index]; }
  const std::string& label(std::size_t index) const { return labels_[index]; }

 private:
  std::vector<Formula> members_;
  std::vector<std::string> labels_;
};

/* Bit-packed satisfaction table: one row of bits per family member, one
 * column per drawn sample. Rows are kept in 64-bit words so the Rademacher
 * estimator can use popcounts. */
class SatisfactionMatrix {
 public:
  explicit SatisfactionMatrix(std::size_t members);

  /* Record one sample's satisfaction bit for every member. */
  void append(const std::vector<bool>& bits);

  std::size_t members() const { return counts_.size(); }
  std::size_t samples() const { return samples_; }

  bool at(std::size_t member, std::size_t sample) const;

  /* Number of satisfying samples seen so far for one member. */
  std::uint64_t count(std::size_t member) const { return counts_[member]; }

  const std::vector<std::uint64_t>& row(std::size_t member) const {
    return rows_[member];
  }

 private:
  std::vector<std::vector<std::uint64_t>> rows_;
  std::vector<std::uint64_t> counts_;
  std::size_t samples_ = 0;
};

/* Smallest empirical satisfaction frequency across members. */
double empirical_min(const std::vector<std::uint64_t>& counts,
                     std::uint64_t samples);

/* Monte-Carlo estimate of the empirical Rademacher average
 * E_eta max_f |(1/N) sum_i eta_i phi_f(sigma_i)| over `draws` sign
 * vectors. Always in [0, 1]. */
double rademacher_average(const SatisfactionMatrix& matrix, std::size_t draws,
                          Rng& rng);

/* Data-dependent confidence radius d_N = 2 * R_N + sqrt(-9 ln(alpha) /
 * (2N)): with probability at least 1 - alpha, every member's true
 * satisfaction probability lies within d_N of its empirical frequency. */
double interval_radius(double rademacher, double alpha, std::uint64_t samples);

struct CiOptions {
  std::size_t eta_draws = 200;      /* sign vectors per estimate */
  std::size_t recompute_every = 10; /* samples between estimates */
  std::uint64_t cap = 100000;

  void validate() const;
};

/* One confidence-interval model-checking run over a formula family. */
struct CiRunRecord {
  Outcome outcome = Outcome::kUndecided;
  std::uint64_t tau = 0;       /* samples consumed */
  double empirical_min = 0.0;  /* min_f count_f / tau at stop */
  double radius = 0.0;         /* d_N at stop */
  double rademacher = 0.0;     /* R_N at stop */
  std::vector<std::uint64_t> member_counts;
  std::vector<std::string> member_labels;
  double threshold = 0.0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  CiOptions options;
};

/* Decide whether min_f p_f exceeds or falls below `threshold`: draw
 * samples, maintain the confidence band from the Rademacher average, and
 * stop as soon as the band clears the threshold on either side (Null above,
 * Alt below). Sign vectors come from a child stream of `rng`, so sample
 * draws are unaffected by how often the band is recomputed. */
CiRunRecord run_ci_smc(SampleSource& source, const Family& family,
                       double threshold, double alpha,
                       const CiOptions& options, Rng& rng);

std::string to_json(const CiRunRecord& record);

}  // namespace smcedp
