#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "teamchess/rl/model.hpp"
#include "teamchess/rl/train.hpp"
#include "teamchess/team/match.hpp"
#include "teamchess/util/errors.hpp"

namespace teamchess::rl {

struct RolloutConfig {
  int n_rollouts = 1;
  int ply_cap = chess::kDefaultPlyCap;
  std::optional<team::Adjudication> adjudication;
};

/// Members, arbitration and opponent used to continue a game from a disagreement.
struct RolloutStack {
  engines::EngineFactory member1;
  engines::EngineFactory member2;
  team::ManagerFactory manager;
  engines::EngineFactory adversary;
};

struct RolloutEstimate {
  team::DisagreementRecord disagreement;
  double q1 = 0.0;
  double q2 = 0.0;
  int n_rollouts = 0;
  int survived1 = 0;
  int survived2 = 0;
};

/// Too few rollouts of a branch finished.
class RolloutError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

/// Plays each recommendation and lets the team, arbitrated by the stack's
/// manager, finish the game against the adversary. Rollout r of either branch
/// uses the game seed derive_seed(seed, {r}). Aborted rollouts are dropped;
/// fewer than half surviving in a branch raises RolloutError. The repetition
/// history before the disagreement is not known and starts empty.
RolloutEstimate estimate_q(const team::DisagreementRecord& d, const RolloutStack& stack, const RolloutConfig& cfg,
                           std::uint64_t seed);

/// Label argmax q (0 for member 1), weight |q1 - q2|; nullopt when q1 == q2.
std::optional<TrainingExample> example_from_estimate(const RolloutEstimate& e);

/// Ground truth for the material-switching member pair: member 1 when the side
/// to move is ahead in material, member 2 otherwise.
int material_routing_label(const chess::BoardState& s);

struct DatasetEntry {
  int iteration = 0;
  RolloutEstimate estimate;
  TrainingExample example;
};

std::string to_json_line(const DatasetEntry& e);
DatasetEntry dataset_entry_from_json(const std::string& line);  // ParseError

struct IterationReport {
  int iteration = 0;
  std::size_t disagreements = 0;  // harvested this iteration
  std::size_t estimated = 0;      // sent to rollouts after subsampling
  std::size_t failed_estimates = 0;
  std::size_t ties_dropped = 0;
  std::size_t dataset_size = 0;   // cumulative
  double train_loss = 0.0;
  std::optional<double> heldout_routing_accuracy;
  std::string routing_labels;     // "oracle" or "rollouts"
  std::size_t heldout_examples = 0;
  team::MatchStatistics team;     // trained manager on held-out openings
};

/// Columns: iteration, dataset_size, train_loss, heldout_routing_accuracy,
/// team_wdl, sem, followed by bookkeeping columns.
std::string training_report_csv(const std::vector<IterationReport>& reports);

using RoutingOracle = std::function<int(const chess::BoardState&)>;

struct PolicyIterationConfig {
  engines::EngineFactory member1;
  engines::EngineFactory member2;
  engines::EngineFactory adversary;
  std::vector<chess::BoardState> train_openings;
  std::vector<chess::BoardState> heldout_openings;
  ArchSpec arch;
  double init_gain = 0.02;
  OptimizerConfig optimizer;
  int iterations = 3;
  RolloutConfig rollout;
  /// Per-iteration cap on disagreements sent to rollouts (seeded subsample); 0 keeps all.
  std::size_t max_disagreements = 0;
  /// Cap on held-out states scored for routing accuracy.
  std::size_t max_heldout_examples = 200;
  /// Harvest and evaluation matches; workers also parallelize rollouts and gradients.
  team::MatchOptions match;
  std::uint64_t seed = 0;
  /// When set, held-out routing accuracy is measured against it instead of rollout labels.
  RoutingOracle oracle;
  /// Checkpoints, dataset and report are written here when set, and an
  /// interrupted run resumes from the last completed iteration.
  std::optional<std::filesystem::path> out_dir;
  /// Stored with the run state; resuming with a different fingerprint is refused.
  std::string fingerprint;
  std::function<void(const std::string&)> log;
};

struct PolicyIterationResult {
  ModelParams params;
  std::vector<IterationReport> reports;
  std::vector<DatasetEntry> dataset;
};

/// Iteration 0 harvests with the random manager; later iterations with the
/// manager trained so far. Throws DegenerateTeamError when a harvest yields
/// no disagreements.
PolicyIterationResult run_policy_iteration(const PolicyIterationConfig& cfg);

}  // namespace teamchess::rl
