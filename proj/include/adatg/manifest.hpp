#pragma once

#include <cstdint>
#include <string>

namespace adatg {

constexpr const char* kToolVersion = "0.1.0";

// Provenance record written into every output directory before any artifact.
struct RunManifest {
    std::string command_line;
    std::string config_hash;  // fnv1a64 hex digest of the canonical config text
    uint64_t seed = 0;
    std::string created_utc;
    std::string tool_version = kToolVersion;
};

RunManifest make_manifest(const std::string& command_line, const std::string& config_text,
                          uint64_t seed);

// Creates dir if needed and writes manifest.txt. A directory holds exactly
// one manifest: refuses to overwrite unless force is set.
void write_manifest(const std::string& dir, const RunManifest& manifest, bool force = false);

RunManifest read_manifest(const std::string& dir);

}  // namespace adatg
