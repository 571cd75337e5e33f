#include "smcedp/run_record.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "number_format.hpp"
#include "smcedp/errors.hpp"
#include "smcedp/version.hpp"

namespace smcedp {

namespace {

using OrderedJson = nlohmann::ordered_json;

Outcome outcome_from_string(const std::string& text) {
  if (text == "null") return Outcome::kNull;
  if (text == "alt") return Outcome::kAlt;
  if (text == "undecided") return Outcome::kUndecided;
  throw DomainError("unknown outcome '" + text + "' in record");
}

OrderedJson record_to_value(const RunRecord& record) {
  OrderedJson config{
      {"threshold", record.config.threshold},
      {"indifference", record.config.indifference},
      {"alpha", record.config.alpha},
      {"cap", record.config.cap},
  };
  OrderedJson value{
      {"algorithm", record.algorithm},
      {"algorithm_version", kAlgorithmVersion},
      {"rng", Rng::kAlgorithm},
      {"outcome", to_string(record.outcome)},
      {"tau", record.tau},
      {"successes", record.successes},
      {"final_log_ratio", record.final_log_ratio},
      {"seed", record.seed},
      {"config", std::move(config)},
  };
  if (record.epsilon) value["epsilon"] = *record.epsilon;
  if (record.noise) value["L"] = *record.noise;
  if (record.noise_rate) value["rate"] = *record.noise_rate;
  return value;
}

RunRecord record_from_value(const OrderedJson& value) {
  RunRecord record;
  record.algorithm = value.at("algorithm").get<std::string>();
  record.outcome =
      outcome_from_string(value.at("outcome").get<std::string>());
  record.tau = value.at("tau").get<std::uint64_t>();
  record.successes = value.at("successes").get<std::uint64_t>();
  record.final_log_ratio = value.at("final_log_ratio").get<double>();
  record.seed = value.at("seed").get<std::uint64_t>();
  const auto& config = value.at("config");
  record.config.threshold = config.at("threshold").get<double>();
  record.config.indifference = config.at("indifference").get<double>();
  record.config.alpha = config.at("alpha").get<double>();
  record.config.cap = config.at("cap").get<std::uint64_t>();
  if (value.contains("epsilon")) {
    record.epsilon = value.at("epsilon").get<double>();
  }
  if (value.contains("L")) record.noise = value.at("L").get<double>();
  if (value.contains("rate")) {
    record.noise_rate = value.at("rate").get<double>();
  }
  return record;
}

}  // namespace

std::string to_json(const RunRecord& record) {
  return record_to_value(record).dump(2);
}

RunRecord run_record_from_json(const std::string& text) {
  try {
    return record_from_value(OrderedJson::parse(text));
  } catch (const nlohmann::json::exception& error) {
    throw DomainError(std::string("malformed run record: ") + error.what());
  }
}

void write_run_record(const std::filesystem::path& path,
                      const RunRecord& record) {
  std::ofstream out(path);
  if (!out) throw SourceError("cannot write record " + path.string());
  out << to_json(record) << "\n";
  if (!out) throw SourceError("error while writing " + path.string());
}

RunRecord read_run_record(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SourceError("cannot read record " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return run_record_from_json(buffer.str());
}

RunSummary summarize(const std::vector<RunRecord>& records,
                     Outcome reference) {
  RunSummary summary;
  summary.runs = records.size();
  if (records.empty()) return summary;

  double tau_sum = 0.0;
  std::size_t matches = 0;
  for (const auto& record : records) {
    switch (record.outcome) {
      case Outcome::kNull:
        ++summary.null_count;
        break;
      case Outcome::kAlt:
        ++summary.alt_count;
        break;
      case Outcome::kUndecided:
        ++summary.undecided_count;
        break;
    }
    if (record.outcome == reference) ++matches;
    tau_sum += static_cast<double>(record.tau);
  }
  summary.accuracy =
      static_cast<double>(matches) / static_cast<double>(records.size());
  summary.mean_tau = tau_sum / static_cast<double>(records.size());

  if (records.size() >= 2) {
    double squares = 0.0;
    for (const auto& record : records) {
      const double diff =
          static_cast<double>(record.tau) - summary.mean_tau;
      squares += diff * diff;
    }
    summary.std_tau =
        std::sqrt(squares / static_cast<double>(records.size() - 1));
  }
  return summary;
}

std::string records_to_csv(const std::vector<RunRecord>& records) {
  std::string out =
      "rep,algorithm,outcome,tau,successes,final_log_ratio,seed,epsilon,L,"
      "rate\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const RunRecord& record = records[i];
    out += std::to_string(i);
    out += ",";
    out += record.algorithm;
    out += ",";
    out += to_string(record.outcome);
    out += ",";
    out += std::to_string(record.tau);
    out += ",";
    out += std::to_string(record.successes);
    out += ",";
    out += detail::format_double(record.final_log_ratio);
    out += ",";
    out += std::to_string(record.seed);
    out += ",";
    out += record.epsilon ? detail::format_double(*record.epsilon) : "";
    out += ",";
    out += record.noise ? detail::format_double(*record.noise) : "";
    out += ",";
    out += record.noise_rate ? detail::format_double(*record.noise_rate) : "";
    out += "\n";
  }
  return out;
}

}  // namespace smcedp
