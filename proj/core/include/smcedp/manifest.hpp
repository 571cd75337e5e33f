#pragma once

#include <cstdint>
#include <string>

namespace smcedp {

/* Provenance block stamped into every artifact a tool run produces. Two
 * runs with equal manifests (timestamp aside) must produce byte-identical
 * outputs. */
struct Manifest {
  std::string subcommand;
  std::string config_path; /* empty when no config file was given */
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string version;   /* tool version */
  std::string timestamp; /* ISO 8601 UTC, the only unstable field */
};

/* Manifest with the current wall-clock timestamp. */
Manifest make_manifest(const std::string& subcommand,
                       const std::string& config_path, std::uint64_t seed,
                       const std::string& out_dir);

std::string to_json(const Manifest& manifest);

/* '# manifest: {...}' single-line header for CSV artifacts. */
std::string manifest_comment(const Manifest& manifest);

/* Add a "manifest" field to an existing serialized JSON object. */
std::string embed_manifest(const std::string& object_json,
                           const Manifest& manifest);

}  // namespace smcedp
