/* smcedp: statistical model checking with expectedly private stopping.
 *
 * Subcommands:
 *   check         sequential probability ratio test of an STL property
 *   audit         empirical privacy audit of the randomized-bound test
 *   demo-traffic  canned intersection-crossing configuration for check
 *
 * Exit codes: 0 success, 2 configuration or formula errors, 3 sample-source
 * failures, 4 anything else. */

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "smcedp/audit.hpp"
#include "smcedp/config.hpp"
#include "smcedp/csv.hpp"
#include "smcedp/edp.hpp"
#include "smcedp/errors.hpp"
#include "smcedp/manifest.hpp"
#include "smcedp/models.hpp"
#include "smcedp/parallel.hpp"
#include "smcedp/parser.hpp"
#include "smcedp/run_record.hpp"
#include "smcedp/sprt.hpp"
#include "smcedp/version.hpp"

namespace {

using namespace smcedp;

constexpr std::uint64_t kRunStream = 0x636c692d72756e00ull;

/* Values shared by every subcommand; flags override config keys. */
struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> reps;
  std::optional<std::uint64_t> cap;
  std::optional<double> epsilon;
  std::optional<int> jobs;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path,
                  "key = value configuration file");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--seed", flags.seed, "root RNG seed");
  cmd->add_option("--reps", flags.reps, "number of repetitions");
  cmd->add_option("--cap", flags.cap, "draw budget per run");
  cmd->add_option("--epsilon", flags.epsilon,
                  "privacy level (enables the randomized-bound test)");
  cmd->add_option("--jobs", flags.jobs, "worker threads");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw SourceError("cannot write " + path.string());
  out << text;
  if (!out) throw SourceError("error while writing " + path.string());
}

/* ---------------------------------------------------------------- check */

struct CheckPlan {
  std::string source_kind;
  std::unique_ptr<SampleSource> source;
  Formula formula = Formula::truth();
  SprtConfig sprt;
  std::optional<double> epsilon;
  std::uint64_t reps = 1;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool goal_less = false;
  Outcome truth = Outcome::kNull;
  std::string out_dir = "smcedp-out";
};

const std::set<std::string> kCheckKeys = {
    "source",   "p_phi",     "v_lim", "sigma_v", "horizon", "dt",
    "trace_dir", "formula",  "formula_text",     "p",       "delta",
    "alpha",    "epsilon",   "reps",  "cap",     "seed",    "jobs",
    "goal",     "truth",     "out",
};

CheckPlan build_check_plan(const KeyValueConfig& config,
                           const CommonFlags& flags) {
  config.require_known(kCheckKeys);
  CheckPlan plan;

  plan.source_kind = config.get_string("source", "bernoulli");
  std::optional<Formula> formula;
  if (plan.source_kind == "bernoulli") {
    plan.source =
        std::make_unique<BernoulliOracle>(config.get_double("p_phi"));
    formula = BernoulliOracle::reference_formula();
  } else if (plan.source_kind == "uniform") {
    plan.source = std::make_unique<UniformOracle>();
  } else if (plan.source_kind == "traffic") {
    auto traffic = std::make_unique<TrafficSurrogate>(
        config.get_double("v_lim", 13.0), config.get_double("sigma_v", 3.0),
        config.get_double("horizon", 240.0), config.get_double("dt", 1.0));
    formula = traffic->property();
    plan.source = std::move(traffic);
  } else if (plan.source_kind == "replay") {
    /* Replay below gets its seed later; defer construction. */
  } else {
    throw ConfigError("unknown source '" + plan.source_kind + "'");
  }

  plan.sprt.threshold = config.get_double("p", 0.5);
  plan.sprt.indifference = config.get_double("delta", 0.05);
  plan.sprt.alpha = config.get_double("alpha", 0.05);
  plan.sprt.cap = flags.cap.value_or(config.get_u64("cap", 1000000));
  plan.reps = flags.reps.value_or(config.get_u64("reps", 1));
  plan.seed = flags.seed.value_or(config.get_u64("seed", 0));
  plan.jobs =
      flags.jobs.value_or(static_cast<int>(config.get_u64("jobs", 1)));
  if (plan.jobs < 1) throw ConfigError("jobs must be at least 1");
  if (flags.epsilon) {
    plan.epsilon = *flags.epsilon;
  } else if (config.has("epsilon")) {
    plan.epsilon = config.get_double("epsilon");
  }
  plan.out_dir = !flags.out_dir.empty()
                     ? flags.out_dir
                     : config.get_string("out", "smcedp-out");

  if (plan.source_kind == "replay") {
    plan.source = std::make_unique<TraceReplaySource>(
        config.get_string("trace_dir"), plan.seed);
    /* The pool cursor is shared state; keep replay runs single-threaded. */
    plan.jobs = 1;
  }

  if (config.has("formula") && config.has("formula_text")) {
    throw ConfigError("give either 'formula' (a file) or 'formula_text'");
  }
  if (config.has("formula")) {
    const std::string path = config.get_string("formula");
    std::ifstream in(path);
    if (!in) throw SourceError("cannot open formula file " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    formula = parse_formula(text);
  } else if (config.has("formula_text")) {
    formula = parse_formula(config.get_string("formula_text"));
  }
  if (!formula) {
    throw ConfigError("source '" + plan.source_kind +
                      "' has no default property; give 'formula' or "
                      "'formula_text'");
  }
  plan.formula = *formula;

  const std::string goal = config.get_string("goal", "greater");
  if (goal == "less") {
    plan.goal_less = true;
  } else if (goal != "greater") {
    throw ConfigError("config key 'goal' must be 'greater' or 'less'");
  }
  const std::string truth = config.get_string("truth", "null");
  if (truth == "alt") {
    plan.truth = Outcome::kAlt;
  } else if (truth != "null") {
    throw ConfigError("config key 'truth' must be 'null' or 'alt'");
  }

  if (plan.goal_less) {
    /* Checking p_phi < p: negate the property and test the complementary
     * threshold; the machinery's Null then certifies the '<' claim. */
    plan.formula = Formula::negation(plan.formula);
    plan.sprt.threshold = 1.0 - plan.sprt.threshold;
  }
  plan.sprt.validate();
  if (plan.epsilon && !(*plan.epsilon > 0.0)) {
    throw ConfigError("privacy level epsilon must be positive");
  }
  return plan;
}

std::string summary_csv(const RunSummary& summary, bool with_rows) {
  std::string out = "reps,null,alt,undecided,accuracy,mean_tau,std_tau\n";
  if (!with_rows) return out;
  char row[160];
  std::snprintf(row, sizeof(row), "%zu,%zu,%zu,%zu,%.17g,%.17g,%.17g\n",
                summary.runs, summary.null_count, summary.alt_count,
                summary.undecided_count, summary.accuracy, summary.mean_tau,
                summary.std_tau);
  out += row;
  return out;
}

int run_check(const CommonFlags& flags, const char* subcommand) {
  const KeyValueConfig config =
      flags.config_path.empty() ? KeyValueConfig::parse("")
                                : KeyValueConfig::load(flags.config_path);
  CheckPlan plan = build_check_plan(config, flags);

  const Manifest manifest =
      make_manifest(subcommand, flags.config_path, plan.seed, plan.out_dir);
  std::filesystem::create_directories(plan.out_dir);

  std::vector<RunRecord> records(plan.reps);
  parallel_for(plan.reps, plan.jobs, [&](std::size_t i) {
    Rng rng(plan.seed, {kRunStream, i});
    if (plan.epsilon) {
      EdpConfig edp{plan.sprt, *plan.epsilon};
      records[i] = run_edp(*plan.source, plan.formula, edp, rng);
    } else {
      records[i] = run_sprt(*plan.source, plan.formula, plan.sprt, rng);
    }
  });

  const std::filesystem::path out_dir(plan.out_dir);
  for (std::size_t i = 0; i < records.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "run_%04zu.json", i);
    write_text(out_dir / name,
               embed_manifest(to_json(records[i]), manifest) + "\n");
  }
  write_text(out_dir / "runs.csv",
             manifest_comment(manifest) + records_to_csv(records));
  const RunSummary summary = summarize(records, plan.truth);
  write_text(out_dir / "summary.csv",
             manifest_comment(manifest) +
                 summary_csv(summary, !records.empty()));

  std::printf("%s: %zu run(s) on source '%s'%s\n", subcommand, summary.runs,
              plan.source_kind.c_str(),
              plan.epsilon ? " (randomized bounds)" : "");
  if (summary.runs > 0) {
    std::printf(
        "  null %zu, alt %zu, undecided %zu; accuracy %.4f, mean tau %.1f, "
        "sd %.1f\n",
        summary.null_count, summary.alt_count, summary.undecided_count,
        summary.accuracy, summary.mean_tau, summary.std_tau);
  }
  std::printf("  wrote %s\n", plan.out_dir.c_str());
  return 0;
}

/* ---------------------------------------------------------------- audit */

const std::set<std::string> kAuditKeys = {
    "p",     "delta",        "alpha",         "epsilon",
    "p_phi", "flip_index",   "pairs",         "noise_samples",
    "bin_width", "min_expected_count", "slack", "cap",
    "seed",  "jobs",         "out",
};

int run_audit_cmd(const CommonFlags& flags) {
  const KeyValueConfig config =
      flags.config_path.empty() ? KeyValueConfig::parse("")
                                : KeyValueConfig::load(flags.config_path);
  config.require_known(kAuditKeys);

  AuditConfig audit;
  audit.edp.base.threshold = config.get_double("p", 0.5);
  audit.edp.base.indifference = config.get_double("delta", 0.05);
  audit.edp.base.alpha = config.get_double("alpha", 0.05);
  audit.edp.base.cap = flags.cap.value_or(config.get_u64("cap", 1000000));
  audit.edp.epsilon = flags.epsilon.value_or(config.get_double("epsilon", 0.05));
  audit.bit_probability = config.get_double("p_phi", 0.75);
  audit.flip_index = config.get_u64("flip_index", 0);
  audit.pairs = config.get_u64("pairs", 500);
  audit.noise_samples =
      flags.reps.value_or(config.get_u64("noise_samples", 10000));
  audit.bin_width = config.get_double("bin_width", 130.0);
  audit.min_expected_count = config.get_double("min_expected_count", 5.0);
  audit.slack = config.get_double("slack", 1.25);
  audit.seed = flags.seed.value_or(config.get_u64("seed", 0));
  audit.jobs =
      flags.jobs.value_or(static_cast<int>(config.get_u64("jobs", 1)));

  const std::string out_dir = !flags.out_dir.empty()
                                  ? flags.out_dir
                                  : config.get_string("out", "smcedp-out");
  const Manifest manifest =
      make_manifest("audit", flags.config_path, audit.seed, out_dir);

  const AuditReport report = run_audit(audit);

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  write_text(dir / "report.json",
             embed_manifest(to_json(report), manifest) + "\n");
  write_text(dir / "histogram.csv",
             manifest_comment(manifest) + histogram_to_csv(report));
  write_text(dir / "att_samples.csv",
             manifest_comment(manifest) + att_samples_to_csv(report));

  std::fputs(render_audit_summary(report).c_str(), stdout);
  std::printf("  wrote %s\n", out_dir.c_str());
  return 0;
}

/* --------------------------------------------------------- demo-traffic */

int run_demo_traffic(const std::string& decision_label,
                     const CommonFlags& flags) {
  Decision decision;
  if (decision_label == "right") {
    decision = Decision::kRight;
  } else if (decision_label == "straight") {
    decision = Decision::kStraight;
  } else if (decision_label == "left") {
    decision = Decision::kLeft;
  } else {
    throw ConfigError("unknown decision '" + decision_label +
                      "' (expected right, straight or left)");
  }

  /* Case-study regime: per-decision speed model and threshold p. */
  double v_lim = 0.0;
  double sigma_v = 0.0;
  double p = 0.0;
  switch (decision) {
    case Decision::kRight:
      v_lim = 13.0, sigma_v = 3.0, p = 0.50;
      break;
    case Decision::kStraight:
      v_lim = 50.0, sigma_v = 10.0, p = 0.35;
      break;
    case Decision::kLeft:
      v_lim = 15.0, sigma_v = 5.0, p = 0.34;
      break;
  }

  std::string config_text;
  config_text += "source = traffic\n";
  config_text += "v_lim = " + std::to_string(v_lim) + "\n";
  config_text += "sigma_v = " + std::to_string(sigma_v) + "\n";
  config_text += "horizon = 240\n";
  config_text += "dt = 1\n";
  config_text += "p = " + std::to_string(p) + "\n";
  config_text += "delta = 0.05\n";
  config_text += "alpha = 0.05\n";
  config_text += "reps = 100\n";
  config_text += "epsilon = 0.05\n";

  CommonFlags effective = flags;
  if (effective.out_dir.empty()) {
    effective.out_dir = "smcedp-out-" + decision_label;
  }
  const KeyValueConfig config = KeyValueConfig::parse(config_text);
  CheckPlan plan = build_check_plan(config, effective);

  const Manifest manifest = make_manifest("demo-traffic", flags.config_path,
                                          plan.seed, plan.out_dir);
  std::filesystem::create_directories(plan.out_dir);

  std::vector<RunRecord> records(plan.reps);
  parallel_for(plan.reps, plan.jobs, [&](std::size_t i) {
    Rng rng(plan.seed, {kRunStream, i});
    EdpConfig edp{plan.sprt, *plan.epsilon};
    records[i] = run_edp(*plan.source, plan.formula, edp, rng);
  });

  const std::filesystem::path out_dir(plan.out_dir);
  for (std::size_t i = 0; i < records.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "run_%04zu.json", i);
    write_text(out_dir / name,
               embed_manifest(to_json(records[i]), manifest) + "\n");
  }
  write_text(out_dir / "runs.csv",
             manifest_comment(manifest) + records_to_csv(records));
  const RunSummary summary = summarize(records, plan.truth);
  write_text(out_dir / "summary.csv",
             manifest_comment(manifest) +
                 summary_csv(summary, !records.empty()));

  std::printf("demo-traffic %s: v_lim %.0f, sigma %.0f, p %.2f\n",
              decision_label.c_str(), v_lim, sigma_v, p);
  std::printf(
      "  null %zu, alt %zu, undecided %zu; accuracy %.4f, mean tau %.1f\n",
      summary.null_count, summary.alt_count, summary.undecided_count,
      summary.accuracy, summary.mean_tau);
  std::printf("  wrote %s\n", plan.out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"statistical model checking with expectedly private stopping"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonFlags check_flags;
  CLI::App* check = app.add_subcommand(
      "check", "sequential test of an STL property over a sample source");
  add_common_flags(check, check_flags);

  CommonFlags audit_flags;
  CLI::App* audit = app.add_subcommand(
      "audit", "empirical privacy audit of the randomized-bound test");
  add_common_flags(audit, audit_flags);

  CommonFlags demo_flags;
  std::string decision_label;
  CLI::App* demo = app.add_subcommand(
      "demo-traffic", "canned intersection-crossing check");
  demo->add_option("decision", decision_label,
                   "turn under test: right, straight or left")
      ->required();
  add_common_flags(demo, demo_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::CallForVersion& version) {
    return app.exit(version);
  } catch (const CLI::ParseError& error) {
    app.exit(error);
    return 2;
  }

  try {
    if (check->parsed()) return run_check(check_flags, "check");
    if (audit->parsed()) return run_audit_cmd(audit_flags);
    return run_demo_traffic(decision_label, demo_flags);
  } catch (const ConfigError& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return 2;
  } catch (const ParseError& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return 2;
  } catch (const SourceError& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return 3;
  } catch (const std::exception& error) {
    std::fprintf(stderr, "internal error: %s\n", error.what());
    return 4;
  }
}
