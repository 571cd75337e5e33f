#include "smcedp/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "number_format.hpp"
#include "smcedp/errors.hpp"

namespace smcedp {

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) {
    /* Trim surrounding blanks; keeps 't, x0' headers usable. */
    const auto begin = cell.find_first_not_of(" \t\r");
    const auto end = cell.find_last_not_of(" \t\r");
    cells.push_back(begin == std::string::npos
                        ? std::string()
                        : cell.substr(begin, end - begin + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, const std::filesystem::path& path,
                  std::size_t row) {
  double value = 0.0;
  const auto result =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (result.ec != std::errc() || result.ptr != cell.data() + cell.size()) {
    throw SourceError(path.string() + ": row " + std::to_string(row) +
                      ": cannot parse '" + cell + "' as a number");
  }
  return value;
}

}  // namespace

Signal read_signal_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SourceError("cannot open trace file " + path.string());

  std::string line;
  if (!std::getline(in, line)) {
    throw SourceError(path.string() + ": empty trace file");
  }
  std::vector<std::string> header = split_row(line);
  if (header.size() < 2 || header.front() != "t") {
    throw SourceError(path.string() +
                      ": header must be 't,<channel>,...', got '" + line + "'");
  }
  std::vector<std::string> channels(header.begin() + 1, header.end());

  std::vector<double> times;
  std::vector<std::vector<double>> samples;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_row(line);
    if (cells.size() != header.size()) {
      throw SourceError(path.string() + ": row " + std::to_string(row) +
                        " has " + std::to_string(cells.size()) +
                        " cells, expected " + std::to_string(header.size()));
    }
    times.push_back(parse_cell(cells.front(), path, row));
    std::vector<double> sample;
    sample.reserve(channels.size());
    for (std::size_t i = 1; i < cells.size(); ++i) {
      sample.push_back(parse_cell(cells[i], path, row));
    }
    samples.push_back(std::move(sample));
  }
  if (samples.empty()) {
    throw SourceError(path.string() + ": trace contains no samples");
  }
  if (std::abs(times.front()) > 1e-9) {
    throw SourceError(path.string() + ": trace must start at t = 0");
  }

  double period = 1.0;
  if (times.size() >= 2) {
    period = times[1] - times[0];
    if (!(period > 0.0)) {
      throw SourceError(path.string() + ": time stamps must increase");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
      const double expected = static_cast<double>(i) * period;
      if (std::abs(times[i] - expected) >
          1e-9 * std::max(1.0, std::abs(expected))) {
        throw SourceError(path.string() + ": non-uniform sample grid at row " +
                          std::to_string(i + 2));
      }
    }
  }
  return Signal(std::move(channels), period, std::move(samples));
}

void write_signal_csv(const std::filesystem::path& path,
                      const Signal& signal) {
  std::ofstream out(path);
  if (!out) throw SourceError("cannot write trace file " + path.string());
  out << "t";
  for (const auto& channel : signal.channels()) out << "," << channel;
  out << "\n";
  for (std::size_t k = 0; k < signal.sample_count(); ++k) {
    out << detail::format_double(static_cast<double>(k) *
                                 signal.sample_period());
    for (std::size_t c = 0; c < signal.dimension(); ++c) {
      out << "," << detail::format_double(signal.value(k, c));
    }
    out << "\n";
  }
  if (!out) throw SourceError("error while writing " + path.string());
}

}  // namespace smcedp
