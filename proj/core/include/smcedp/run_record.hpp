#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "smcedp/sprt.hpp"

namespace smcedp {

/* JSON form of a run record. Field order and number formatting are stable,
 * so identical runs serialize to identical bytes; doubles round-trip
 * exactly. */
std::string to_json(const RunRecord& record);
RunRecord run_record_from_json(const std::string& text);

void write_run_record(const std::filesystem::path& path,
                      const RunRecord& record);
RunRecord read_run_record(const std::filesystem::path& path);

/* Batch summary statistics over a set of run records. */
struct RunSummary {
  std::size_t runs = 0;
  std::size_t null_count = 0;
  std::size_t alt_count = 0;
  std::size_t undecided_count = 0;
  /* Fraction of outcomes matching the reference hypothesis (Null unless
   * configured otherwise). */
  double accuracy = 0.0;
  double mean_tau = 0.0;
  double std_tau = 0.0; /* sample standard deviation; 0 for fewer than 2 */
};

RunSummary summarize(const std::vector<RunRecord>& records,
                     Outcome reference = Outcome::kNull);

/* CSV row form of records: one header plus one row per run. */
std::string records_to_csv(const std::vector<RunRecord>& records);

}  // namespace smcedp
