#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace teamchess::experiment {

inline constexpr const char* kManifestName = "manifest.json";

struct ArtifactEntry {
  std::string path;  // relative to the manifest's directory, '/' separated
  std::string sha256;
  friend bool operator==(const ArtifactEntry&, const ArtifactEntry&) = default;
};

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::string tool_version;
  std::vector<ArtifactEntry> artifacts;  // sorted by path
  std::string started_at;
  std::string finished_at;

  /// sha256 over everything except the timestamps.
  std::string content_hash() const;
};

std::string tool_version();

/// Current UTC time, ISO 8601.
std::string utc_timestamp();

/// Hashes every regular file under `dir` except manifests, recursively.
std::vector<ArtifactEntry> collect_artifacts(const std::filesystem::path& dir);

/// Writes `dir/manifest.json` atomically; the file carries content_hash too.
void write_manifest(const std::filesystem::path& dir, const RunManifest& m);

/// ParseError on a malformed file.
RunManifest read_manifest(const std::filesystem::path& file);

}  // namespace teamchess::experiment
