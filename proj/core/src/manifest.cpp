#include "smcedp/manifest.hpp"

#include <chrono>
#include <ctime>

#include "json.hpp"
#include "smcedp/errors.hpp"
#include "smcedp/version.hpp"

namespace smcedp {

namespace {

using OrderedJson = nlohmann::ordered_json;

std::string now_utc() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm parts{};
  gmtime_r(&now, &parts);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &parts);
  return buffer;
}

OrderedJson manifest_to_value(const Manifest& manifest) {
  return OrderedJson{
      {"subcommand", manifest.subcommand},
      {"config", manifest.config_path},
      {"seed", manifest.seed},
      {"out", manifest.out_dir},
      {"version", manifest.version},
      {"timestamp", manifest.timestamp},
  };
}

}  // namespace

Manifest make_manifest(const std::string& subcommand,
                       const std::string& config_path, std::uint64_t seed,
                       const std::string& out_dir) {
  Manifest manifest;
  manifest.subcommand = subcommand;
  manifest.config_path = config_path;
  manifest.seed = seed;
  manifest.out_dir = out_dir;
  manifest.version = kVersion;
  manifest.timestamp = now_utc();
  return manifest;
}

std::string to_json(const Manifest& manifest) {
  return manifest_to_value(manifest).dump(2);
}

std::string manifest_comment(const Manifest& manifest) {
  return "# manifest: " + manifest_to_value(manifest).dump() + "\n";
}

std::string embed_manifest(const std::string& object_json,
                           const Manifest& manifest) {
  OrderedJson value;
  try {
    value = OrderedJson::parse(object_json);
  } catch (const nlohmann::json::exception& error) {
    throw DomainError(std::string("cannot embed manifest: ") + error.what());
  }
  if (!value.is_object()) {
    throw DomainError("cannot embed manifest into a non-object");
  }
  value["manifest"] = manifest_to_value(manifest);
  return value.dump(2);
}

}  // namespace smcedp
