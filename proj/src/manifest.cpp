#include "basket/manifest.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace basket {

std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string iso_timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const std::string& out_dir, const RunManifest& manifest) {
  nlohmann::json j;
  j["command"] = manifest.command;
  j["config_digest"] = manifest.config_digest;
  j["seed"] = manifest.seed;
  j["version"] = manifest.version;
  j["timestamps"] = {{"started", manifest.started_at}, {"finished", manifest.finished_at}};
  j["outputs"] = manifest.outputs;
  std::ofstream out(out_dir + "/manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest in " + out_dir);
  out << j.dump(2) << "\n";
}

}  // namespace basket
