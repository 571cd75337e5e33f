#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace smcedp {

/* Plain key-value run configuration.
 *
 * One 'key = value' pair per line; blank lines and lines starting with '#'
 * are ignored; values keep interior spaces (so formula text works inline).
 * Duplicate keys are rejected. */
class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text);
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const;

  /* Required-key getters throw ConfigError when the key is absent or the
   * value does not parse; the defaulted forms fall back instead of
   * throwing on absence. */
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_u64(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key,
                        std::uint64_t fallback) const;

  /* Reject any key outside `allowed`; catches typos early. */
  void require_known(const std::set<std::string>& allowed) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

 private:
  const std::string* find(const std::string& key) const;

  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace smcedp
