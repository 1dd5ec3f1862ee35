#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace basket {

inline constexpr const char* kVersion = "0.1.0";

struct RunManifest {
  std::string command;
  std::string config_digest;  // FNV-1a over the config file bytes
  std::uint64_t seed = 0;
  std::string version = kVersion;
  std::string started_at;  // ISO 8601 UTC
  std::string finished_at;
  std::vector<std::string> outputs;
};

std::string fnv1a_digest(const std::string& bytes);
std::string iso_timestamp_now();

/// Serializes to manifest.json in the output directory.
void write_manifest(const std::string& out_dir, const RunManifest& manifest);

}  // namespace basket
