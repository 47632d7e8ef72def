#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "teamchess/experiment/config.hpp"

namespace teamchess::experiment {

struct CommandContext {
  ExperimentConfig config;
  unsigned workers = 1;
  /// Defaults to run_directory(config) when empty.
  std::filesystem::path run_dir;
  std::function<void(const std::string&)> log;

  std::filesystem::path dir() const { return run_dir.empty() ? run_directory(config) : run_dir; }
};

/// Plays the configured team under `manager` (the config's manager when
/// unset) and both members alone against the adversary. With a ladder block
/// and the SME manager, plays every rung instead. Writes games, summaries and
/// a manifest under `<run>/match/<manager>` or `<run>/ladder`, and returns
/// that directory. FailureBudgetExceeded propagates.
std::filesystem::path cmd_run_match(const CommandContext& ctx, const std::optional<ManagerSpec>& manager = {},
                                    const std::optional<std::filesystem::path>& checkpoint = {});

/// Policy iteration into `<run>/train`, resuming an interrupted run. The final
/// parameters are also written to `<run>/train/manager.ckpt`.
std::filesystem::path cmd_train_manager(const CommandContext& ctx);

/// Attention studies for every configured grouping and control on positions
/// sampled from games the RL-managed team plays. Writes `<run>/analysis`.
/// The checkpoint defaults to `<run>/train/manager.ckpt`.
std::filesystem::path cmd_analyze(const CommandContext& ctx, const std::optional<std::filesystem::path>& checkpoint = {});

struct ReportDigest {
  std::string text;
  bool nothing = false;
  /// Missing or inconsistent upstream artifacts.
  std::vector<std::string> gaps;
};

/// Summarizes every run found under `dir`.
ReportDigest cmd_report(const std::filesystem::path& dir);

/// Checks the documented layout of an analysis report.json; returns the problems found.
std::vector<std::string> validate_analysis_report(const std::string& json_text);

}  // namespace teamchess::experiment
