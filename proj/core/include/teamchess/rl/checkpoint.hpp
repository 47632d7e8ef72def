#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "teamchess/rl/model.hpp"

namespace teamchess::rl {

struct CheckpointMeta {
  ArchSpec arch;
  std::uint64_t seed = 0;
  int iteration = 0;
};

/// Binary layout, all integers and floats little-endian:
///   "TCMGRCKP" | u32 version | 6 x i32 arch | u32 tensor count |
///   per tensor: u32 name length, name, u32 rows, u32 cols, rows*cols f64 row-major.
std::string serialize_params(const ModelParams& p);

/// Throws ParseError on a malformed buffer.
ModelParams deserialize_params(const std::string& bytes);

/// Writes `path` and the JSON sidecar `path.json` atomically.
void save_checkpoint(const std::filesystem::path& path, const ModelParams& p, const CheckpointMeta& meta);

/// Throws ParseError on a malformed file and ConfigError if `expected` is
/// given and the stored architecture differs.
ModelParams load_checkpoint(const std::filesystem::path& path, const std::optional<ArchSpec>& expected = std::nullopt);

/// Reads the sidecar.
CheckpointMeta load_checkpoint_meta(const std::filesystem::path& path);

/// sha256 of the serialized parameters.
std::string params_digest(const ModelParams& p);

}  // namespace teamchess::rl
