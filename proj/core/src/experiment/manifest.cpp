#include "teamchess/experiment/manifest.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>

#include <json.hpp>

#include "teamchess/util/errors.hpp"
#include "teamchess/util/io.hpp"

#ifndef TEAMCHESS_VERSION
#define TEAMCHESS_VERSION "unknown"
#endif

namespace teamchess::experiment {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json hashed_part(const RunManifest& m) {
  json arts = json::array();
  for (const auto& a : m.artifacts) arts.push_back({{"path", a.path}, {"sha256", a.sha256}});
  return {{"command", m.command}, {"config_hash", m.config_hash}, {"tool_version", m.tool_version}, {"artifacts", arts}};
}

}  // namespace

std::string RunManifest::content_hash() const { return sha256_hex(hashed_part(*this).dump()); }

std::string tool_version() { return TEAMCHESS_VERSION; }

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<ArtifactEntry> collect_artifacts(const fs::path& dir) {
  std::vector<ArtifactEntry> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().filename() == kManifestName) continue;
    const std::string name = e.path().filename().string();
    if (name.find(".tmp") != std::string::npos) continue;
    out.push_back({fs::relative(e.path(), dir).generic_string(), sha256_file(e.path())});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
  return out;
}

void write_manifest(const fs::path& dir, const RunManifest& m) {
  json j = hashed_part(m);
  j["started_at"] = m.started_at;
  j["finished_at"] = m.finished_at;
  j["content_hash"] = m.content_hash();
  write_file_atomic(dir / kManifestName, j.dump(2) + "\n");
}

RunManifest read_manifest(const fs::path& file) {
  try {
    const json j = json::parse(read_file(file));
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.tool_version = j.at("tool_version").get<std::string>();
    for (const auto& a : j.at("artifacts")) m.artifacts.push_back({a.at("path"), a.at("sha256")});
    m.started_at = j.at("started_at").get<std::string>();
    m.finished_at = j.at("finished_at").get<std::string>();
    return m;
  } catch (const json::exception& e) {
    throw ParseError("manifest " + file.string() + ": " + e.what());
  }
}

}  // namespace teamchess::experiment
