#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "teamchess/rl/model.hpp"

namespace teamchess::rl {

enum class OptimizerKind { Sgd, Adam };

std::string to_string(OptimizerKind k);
OptimizerKind optimizer_kind_from_string(const std::string& s);  // ConfigError

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Sgd;
  double learning_rate = 0.05;
  /// Cosine decay from learning_rate to learning_rate * min_lr_fraction over the run.
  bool cosine_decay = true;
  double min_lr_fraction = 0.0;
  /// Global gradient-norm clip; 0 disables.
  double clip_norm = 1.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  int batch_size = 32;
  int epochs = 30;

  void validate() const;  // ConfigError
};

class Optimizer {
 public:
  virtual ~Optimizer() = default;
  virtual void step(ModelParams& p, const ModelParams& grad, double lr) = 0;
};

std::unique_ptr<Optimizer> make_optimizer(const OptimizerConfig& cfg, const ArchSpec& arch);

/// Scheduled rate for update `step` of `total_steps`.
double scheduled_rate(const OptimizerConfig& cfg, std::size_t step, std::size_t total_steps);

/// sqrt of the sum of squares over every tensor.
double global_norm(const ModelParams& g);

/// 0 or 1, or nullopt when both logits are exactly equal.
std::optional<int> predict(const ModelParams& p, const chess::BoardState& s);

/// Fraction of examples whose prediction matches the label; exact ties count as wrong.
double accuracy(const ModelParams& p, const std::vector<TrainingExample>& examples);

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  std::optional<double> heldout_accuracy;
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochStats> curve;
};

/// Minibatch training with a seeded per-epoch shuffle. Throws NumericError
/// (with epoch and step) if the loss or parameters stop being finite.
TrainResult train_epochs(ModelParams p, const std::vector<TrainingExample>& train,
                         const std::vector<TrainingExample>& heldout, const OptimizerConfig& cfg, std::uint64_t seed,
                         unsigned workers = 1);

}  // namespace teamchess::rl
