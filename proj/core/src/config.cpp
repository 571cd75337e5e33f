#include "smcedp/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "smcedp/errors.hpp"

namespace smcedp {

namespace {

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
  KeyValueConfig config;
  std::istringstream stream(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(stream, line)) {
    ++number;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto equals = stripped.find('=');
    if (equals == std::string::npos) {
      throw ConfigError("config line " + std::to_string(number) +
                        ": expected 'key = value', got '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, equals));
    const std::string value = trim(stripped.substr(equals + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(number) +
                        ": empty key");
    }
    if (config.has(key)) {
      throw ConfigError("config line " + std::to_string(number) +
                        ": duplicate key '" + key + "'");
    }
    config.entries_.emplace_back(key, value);
  }
  return config;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse(buffer.str());
  } catch (const ConfigError& error) {
    throw ConfigError(path.string() + ": " + error.what());
  }
}

bool KeyValueConfig::has(const std::string& key) const {
  return find(key) != nullptr;
}

const std::string* KeyValueConfig::find(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::string KeyValueConfig::get_string(const std::string& key) const {
  const std::string* value = find(key);
  if (value == nullptr) {
    throw ConfigError("missing required config key '" + key + "'");
  }
  return *value;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
  const std::string* value = find(key);
  return value == nullptr ? fallback : *value;
}

double KeyValueConfig::get_double(const std::string& key) const {
  const std::string text = get_string(key);
  double value = 0.0;
  const auto result =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw ConfigError("config key '" + key + "': cannot parse '" + text +
                      "' as a number");
  }
  return value;
}

double KeyValueConfig::get_double(const std::string& key,
                                 double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key) const {
  const std::string text = get_string(key);
  std::uint64_t value = 0;
  const auto result =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw ConfigError("config key '" + key + "': cannot parse '" + text +
                      "' as a nonnegative integer");
  }
  return value;
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key,
                                      std::uint64_t fallback) const {
  return has(key) ? get_u64(key) : fallback;
}

void KeyValueConfig::require_known(
    const std::set<std::string>& allowed) const {
  for (const auto& [key, value] : entries_) {
    if (allowed.find(key) == allowed.end()) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

}  // namespace smcedp
