#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "smcedp/config.hpp"
#include "smcedp/errors.hpp"
#include "smcedp/manifest.hpp"
#include "smcedp/parallel.hpp"
#include "smcedp/rng.hpp"
#include "smcedp/run_record.hpp"
#include "smcedp/version.hpp"

namespace smcedp {
namespace {

TEST(KeyValueConfigTest, ParsesPairsCommentsAndBlanks) {
  const KeyValueConfig config = KeyValueConfig::parse(
      "# run setup\n"
      "\n"
      "threshold = 0.5\n"
      "  reps=200  \n"
      "formula = x0 >= 0 & x1 >= 0\n");
  EXPECT_TRUE(config.has("threshold"));
  EXPECT_FALSE(config.has("missing"));
  EXPECT_DOUBLE_EQ(config.get_double("threshold"), 0.5);
  EXPECT_EQ(config.get_u64("reps"), 200u);
  /* interior spaces survive */
  EXPECT_EQ(config.get_string("formula"), "x0 >= 0 & x1 >= 0");
  EXPECT_EQ(config.entries().size(), 3u);
}

TEST(KeyValueConfigTest, FallbacksAndRequiredKeys) {
  const KeyValueConfig config = KeyValueConfig::parse("alpha = 0.01\n");
  EXPECT_DOUBLE_EQ(config.get_double("alpha", 0.05), 0.01);
  EXPECT_DOUBLE_EQ(config.get_double("delta", 0.05), 0.05);
  EXPECT_EQ(config.get_u64("reps", 100), 100u);
  EXPECT_EQ(config.get_string("out", "default"), "default");
  EXPECT_THROW(config.get_string("out"), ConfigError);
  EXPECT_THROW(config.get_double("missing"), ConfigError);
}

TEST(KeyValueConfigTest, RejectsMalformedInput) {
  EXPECT_THROW(KeyValueConfig::parse("just a line\n"), ConfigError);
  EXPECT_THROW(KeyValueConfig::parse("= 3\n"), ConfigError);
  EXPECT_THROW(KeyValueConfig::parse("a = 1\na = 2\n"), ConfigError);
  const KeyValueConfig config = KeyValueConfig::parse("alpha = abc\nn = -3\n");
  EXPECT_THROW(config.get_double("alpha"), ConfigError);
  EXPECT_THROW(config.get_u64("n"), ConfigError);
}

TEST(KeyValueConfigTest, RequireKnownCatchesTypos) {
  const KeyValueConfig config = KeyValueConfig::parse("alpha = 0.01\n");
  EXPECT_NO_THROW(config.require_known({"alpha", "seed"}));
  EXPECT_THROW(config.require_known({"seed"}), ConfigError);
}

TEST(KeyValueConfigTest, LoadReportsThePath) {
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "smcedp_config_test.cfg";
  std::ofstream(path) << "seed = 9\n";
  EXPECT_EQ(KeyValueConfig::load(path).get_u64("seed"), 9u);
  std::filesystem::remove(path);
  EXPECT_THROW(KeyValueConfig::load(path), ConfigError);
}

TEST(RngTest, PinnedSequence) {
  /* Frozen draws: any change to the key folding or engine seeding is a
   * compatibility break and must show up here. */
  Rng rng(42);
  EXPECT_EQ(rng.next_u64(), 2576493707698874361ull);
  EXPECT_EQ(rng.next_u64(), 17880808640956396325ull);
  EXPECT_EQ(rng.next_u64(), 17896956056310571724ull);
  Rng stream(7, {1, 2});
  EXPECT_EQ(stream.next_u64(), 14834324317556479000ull);
  Rng child(7, {1});
  EXPECT_DOUBLE_EQ(child.uniform01(), 0.66462136680005746);
  EXPECT_STREQ(Rng::kAlgorithm, "splitmix64+mt19937_64/v1");
}

TEST(RngTest, SplitMatchesStreamListAndLeavesParentUntouched) {
  Rng listed(7, {1, 2});
  Rng parent(7, {1});
  Rng split_child = parent.split(2);
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(split_child.next_u64(), listed.next_u64());
  }
  /* Splitting consumed nothing from the parent. */
  Rng fresh(7, {1});
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(parent.next_u64(), fresh.next_u64());
  }
  /* Distinct stream ids diverge immediately. */
  Rng other(7, {1, 3});
  EXPECT_NE(Rng(7, {1, 2}).next_u64(), other.next_u64());
}

TEST(RngTest, UniformRanges) {
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = rng.uniform01_positive();
    ASSERT_GT(v, 0.0);
    ASSERT_LE(v, 1.0);
  }
}

TEST(RngTest, BernoulliValidatesProbability) {
  Rng rng(12);
  EXPECT_THROW(rng.bernoulli(-0.01), DomainError);
  EXPECT_THROW(rng.bernoulli(1.01), DomainError);
  EXPECT_FALSE(rng.bernoulli(0.0));
  EXPECT_TRUE(rng.bernoulli(1.0));
}

TEST(RngTest, ExponentialValidatesRate) {
  Rng rng(13);
  EXPECT_THROW(rng.exponential(0.0), DomainError);
  EXPECT_THROW(rng.exponential(-1.0), DomainError);
  EXPECT_GE(rng.exponential(2.0), 0.0);
}

TEST(RngTest, GaussianMoments) {
  Rng rng(14, {9});
  double sum = 0.0;
  double squares = 0.0;
  const int draws = 30000;
  for (int i = 0; i < draws; ++i) {
    const double x = rng.gaussian(3.0, 2.0);
    sum += x;
    squares += x * x;
  }
  const double mean = sum / draws;
  const double variance = squares / draws - mean * mean;
  EXPECT_NEAR(mean, 3.0, 0.05);
  EXPECT_NEAR(std::sqrt(variance), 2.0, 0.05);
}

TEST(ParallelForTest, CoversEveryIndexOnce) {
  for (int jobs : {1, 2, 7}) {
    std::vector<std::atomic<int>> visits(100);
    parallel_for(100, jobs, [&](std::size_t i) { ++visits[i]; });
    for (const auto& count : visits) EXPECT_EQ(count.load(), 1);
  }
  parallel_for(0, 4, [](std::size_t) { FAIL() << "no work expected"; });
}

TEST(ParallelForTest, FirstWorkerErrorPropagates) {
  EXPECT_THROW(
      parallel_for(50, 4,
                   [](std::size_t i) {
                     if (i == 17) throw DomainError("boom");
                   }),
      DomainError);
}

TEST(ManifestTest, JsonShape) {
  Manifest manifest = make_manifest("check", "run.cfg", 99, "out");
  EXPECT_EQ(manifest.version, kVersion);
  /* ISO 8601 UTC: 2026-08-23T12:34:56Z */
  ASSERT_EQ(manifest.timestamp.size(), 20u);
  EXPECT_EQ(manifest.timestamp[10], 'T');
  EXPECT_EQ(manifest.timestamp.back(), 'Z');

  manifest.timestamp = "2026-01-02T03:04:05Z"; /* deterministic for the test */
  const std::string json = to_json(manifest);
  EXPECT_NE(json.find("\"subcommand\": \"check\""), std::string::npos);
  EXPECT_NE(json.find("\"seed\": 99"), std::string::npos);

  const std::string comment = manifest_comment(manifest);
  EXPECT_EQ(comment.rfind("# manifest: {", 0), 0u);
  EXPECT_EQ(comment.back(), '\n');

  const std::string embedded = embed_manifest("{\n  \"a\": 1\n}", manifest);
  EXPECT_NE(embedded.find("\"manifest\""), std::string::npos);
  EXPECT_NE(embedded.find("\"a\": 1"), std::string::npos);
  EXPECT_THROW(embed_manifest("[1, 2]", manifest), DomainError);
  EXPECT_THROW(embed_manifest("not json", manifest), DomainError);
}

RunRecord sample_record() {
  RunRecord record;
  record.algorithm = "sprt-edp";
  record.outcome = Outcome::kNull;
  record.tau = 137;
  record.successes = 90;
  record.final_log_ratio = 4.71238898038469;
  record.seed = 31337;
  record.config.threshold = 0.5;
  record.config.indifference = 0.03;
  record.config.alpha = 0.01;
  record.config.cap = 1000000;
  record.epsilon = 0.05;
  record.noise = 3.5416789245;
  record.noise_rate = 0.2059;
  return record;
}

TEST(RunRecordTest, JsonRoundTripIsExact) {
  const RunRecord record = sample_record();
  const RunRecord loaded = run_record_from_json(to_json(record));
  EXPECT_EQ(to_json(loaded), to_json(record));
  EXPECT_EQ(loaded.tau, record.tau);
  EXPECT_EQ(loaded.final_log_ratio, record.final_log_ratio);
  ASSERT_TRUE(loaded.noise.has_value());
  EXPECT_EQ(*loaded.noise, *record.noise);

  /* Plain runs leave the privacy fields out entirely. */
  RunRecord plain = sample_record();
  plain.algorithm = "sprt-deterministic";
  plain.epsilon.reset();
  plain.noise.reset();
  plain.noise_rate.reset();
  const std::string json = to_json(plain);
  EXPECT_EQ(json.find("epsilon"), std::string::npos);
  EXPECT_FALSE(run_record_from_json(json).epsilon.has_value());

  EXPECT_THROW(run_record_from_json("{]"), DomainError);
  EXPECT_THROW(run_record_from_json("{\"algorithm\": \"x\"}"), DomainError);
}

TEST(RunRecordTest, FileRoundTrip) {
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "smcedp_record_test.json";
  write_run_record(path, sample_record());
  const RunRecord loaded = read_run_record(path);
  EXPECT_EQ(to_json(loaded), to_json(sample_record()));
  std::filesystem::remove(path);
  EXPECT_THROW(read_run_record(path), SourceError);
}

TEST(RunRecordTest, SummaryStatistics) {
  std::vector<RunRecord> records(4, sample_record());
  records[0].tau = 10;
  records[1].tau = 20;
  records[2].tau = 30;
  records[3].tau = 40;
  records[2].outcome = Outcome::kAlt;
  records[3].outcome = Outcome::kUndecided;
  const RunSummary summary = summarize(records);
  EXPECT_EQ(summary.runs, 4u);
  EXPECT_EQ(summary.null_count, 2u);
  EXPECT_EQ(summary.alt_count, 1u);
  EXPECT_EQ(summary.undecided_count, 1u);
  EXPECT_DOUBLE_EQ(summary.accuracy, 0.5);
  EXPECT_DOUBLE_EQ(summary.mean_tau, 25.0);
  /* sample standard deviation of {10, 20, 30, 40} */
  EXPECT_NEAR(summary.std_tau, 12.909944487358056, 1e-12);
  EXPECT_DOUBLE_EQ(summarize(records, Outcome::kAlt).accuracy, 0.25);

  const RunSummary empty = summarize({});
  EXPECT_EQ(empty.runs, 0u);
  EXPECT_DOUBLE_EQ(empty.mean_tau, 0.0);
}

TEST(RunRecordTest, CsvRows) {
  std::vector<RunRecord> records{sample_record()};
  records[0].epsilon.reset();
  records[0].noise.reset();
  records[0].noise_rate.reset();
  records.push_back(sample_record());
  const std::string csv = records_to_csv(records);
  std::istringstream lines(csv);
  std::string line;
  ASSERT_TRUE(std::getline(lines, line));
  EXPECT_EQ(line,
            "rep,algorithm,outcome,tau,successes,final_log_ratio,seed,"
            "epsilon,L,rate");
  ASSERT_TRUE(std::getline(lines, line));
  EXPECT_EQ(line.rfind("0,sprt-edp,null,137,90,", 0), 0u);
  /* empty trailing fields for the plain run */
  EXPECT_EQ(line.substr(line.size() - 3), ",,,");
  ASSERT_TRUE(std::getline(lines, line));
  EXPECT_NE(line.find("0.05"), std::string::npos);
  EXPECT_FALSE(std::getline(lines, line));
}

TEST(ErrorsTest, Hierarchy) {
  const BoundError bound(2, 5, "bad window");
  EXPECT_EQ(bound.line(), 2u);
  EXPECT_EQ(bound.column(), 5u);
  const ParseError* as_parse = &bound;
  EXPECT_NE(std::string(as_parse->what()).find("2:5"), std::string::npos);
  /* everything the library throws shares one base */
  EXPECT_THROW(throw ConfigError("x"), Error);
  EXPECT_THROW(throw SourceError("x"), Error);
  EXPECT_THROW(throw DomainError("x"), Error);
  EXPECT_THROW(throw ParseError(1, 1, "x"), Error);
}

}  // namespace
}  // namespace smcedp
