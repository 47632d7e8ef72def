#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "teamchess/analysis/attention.hpp"
#include "teamchess/engines/registry.hpp"
#include "teamchess/rl/policy.hpp"
#include "teamchess/team/game.hpp"

namespace teamchess::experiment {

/// A contiguous slice of the opening file.
struct OpeningSlice {
  std::size_t offset = 0;
  std::size_t count = 0;
};

struct ManagerSpec {
  enum class Kind { Sme, Rl, Constant, Random };
  Kind kind = Kind::Random;
  team::MemberId constant = team::MemberId::One;

  /// "sme", "rl", "constant:1", "constant:2" or "random"; ConfigError otherwise.
  static ManagerSpec parse(const std::string& text);
  std::string to_string() const;
  /// File-system safe form, e.g. "constant-1".
  std::string label() const;
  friend bool operator==(const ManagerSpec&, const ManagerSpec&) = default;
};

struct SmeBlock {
  engines::EngineRef expert;
  int tie_epsilon = 0;
};

struct MatchBlock {
  int ply_cap = chess::kDefaultPlyCap;
  std::optional<team::Adjudication> adjudication;
  double failure_budget = 0.01;
};

struct LadderBlock {
  std::vector<engines::EngineRef> experts;
  int tie_epsilon = 0;
};

struct RlBlock {
  rl::ArchSpec arch;
  double init_gain = 0.02;
  int iterations = 3;
  int n_rollouts = 1;
  int rollout_ply_cap = chess::kDefaultPlyCap;
  std::optional<team::Adjudication> rollout_adjudication;
  std::size_t max_disagreements = 0;
  std::size_t max_heldout_examples = 200;
  OpeningSlice heldout;
  rl::OptimizerConfig optimizer;
  /// Only "material" is known; null scores held-out routing against rollout labels.
  std::optional<std::string> routing_oracle;
};

struct AnalysisBlock {
  std::size_t positions = 1000;
  std::vector<analysis::Grouping> groupings;
  std::vector<analysis::Control> controls;
  double init_gain = 0.02;
};

struct ExperimentConfig {
  std::string name;
  std::uint64_t seed = 0;
  /// Resolved against the config file's directory.
  std::filesystem::path output_dir;
  std::filesystem::path openings_file;
  OpeningSlice openings;
  engines::EngineRef member1;
  engines::EngineRef member2;
  engines::EngineRef adversary;
  ManagerSpec manager;
  std::optional<SmeBlock> sme;
  MatchBlock match;
  std::optional<LadderBlock> ladder;
  std::optional<RlBlock> rl;
  std::optional<AnalysisBlock> analysis;

  /// Sorted-key JSON of the document as written, with overrides applied;
  /// the input to config_hash.
  std::string canonical;
};

/// Strict parse: every key is required (optional blocks are written as
/// null) and unknown keys are rejected. Errors name the key path. Relative
/// paths resolve against `base_dir`, and referenced files must exist.
ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Replaces the master seed, keeping `canonical` in step.
ExperimentConfig with_seed(ExperimentConfig cfg, std::uint64_t seed);

/// sha256 of the canonical document.
std::string config_hash(const ExperimentConfig& cfg);

/// `output_dir / <name>-<first 12 hex digits of the config hash>`.
std::filesystem::path run_directory(const ExperimentConfig& cfg);

std::vector<chess::BoardState> load_opening_slice(const std::filesystem::path& file, const OpeningSlice& slice);

}  // namespace teamchess::experiment
