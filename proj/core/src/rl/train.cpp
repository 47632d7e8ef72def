#include "teamchess/rl/train.hpp"

#include <cmath>
#include <numeric>

#include "teamchess/util/errors.hpp"
#include "teamchess/util/rng.hpp"

namespace teamchess::rl {

std::string to_string(OptimizerKind k) { return k == OptimizerKind::Sgd ? "sgd" : "adam"; }

OptimizerKind optimizer_kind_from_string(const std::string& s) {
  if (s == "sgd") return OptimizerKind::Sgd;
  if (s == "adam") return OptimizerKind::Adam;
  throw ConfigError("unknown optimizer '" + s + "' (expected sgd or adam)");
}

void OptimizerConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (min_lr_fraction < 0.0 || min_lr_fraction > 1.0) throw ConfigError("min_lr_fraction must be in [0, 1]");
  if (clip_norm < 0.0) throw ConfigError("clip_norm must be non-negative");
  if (batch_size < 1 || epochs < 1) throw ConfigError("batch_size and epochs must be positive");
  if (beta1 < 0.0 || beta1 >= 1.0 || beta2 < 0.0 || beta2 >= 1.0) throw ConfigError("betas must be in [0, 1)");
}

namespace {

template <typename F>
void zip(ModelParams& a, const ModelParams& b, F&& f) {
  std::vector<const double*> src;
  b.visit([&](const std::string&, const auto& t) { src.push_back(t.data()); });
  std::size_t i = 0;
  a.visit([&](const std::string&, auto& t) {
    const double* s = src[i++];
    for (Eigen::Index j = 0; j < t.size(); ++j) f(t.data()[j], s[j]);
  });
}

class Sgd final : public Optimizer {
 public:
  void step(ModelParams& p, const ModelParams& grad, double lr) override { axpy(p, -lr, grad); }
};

class Adam final : public Optimizer {
 public:
  Adam(const OptimizerConfig& cfg, const ArchSpec& arch)
      : cfg_(cfg), m_(zero_params(arch)), v_(zero_params(arch)) {}

  void step(ModelParams& p, const ModelParams& grad, double lr) override {
    ++t_;
    zip(m_, grad, [&](double& m, double g) { m = cfg_.beta1 * m + (1.0 - cfg_.beta1) * g; });
    zip(v_, grad, [&](double& v, double g) { v = cfg_.beta2 * v + (1.0 - cfg_.beta2) * g * g; });
    const double c1 = 1.0 - std::pow(cfg_.beta1, t_);
    const double c2 = 1.0 - std::pow(cfg_.beta2, t_);
    ModelParams update = m_;
    zip(update, v_, [&](double& u, double v) { u = (u / c1) / (std::sqrt(v / c2) + cfg_.adam_epsilon); });
    axpy(p, -lr, update);
  }

 private:
  OptimizerConfig cfg_;
  ModelParams m_, v_;
  int t_ = 0;
};

}  // namespace

std::unique_ptr<Optimizer> make_optimizer(const OptimizerConfig& cfg, const ArchSpec& arch) {
  cfg.validate();
  if (cfg.kind == OptimizerKind::Adam) return std::make_unique<Adam>(cfg, arch);
  return std::make_unique<Sgd>();
}

double scheduled_rate(const OptimizerConfig& cfg, std::size_t step, std::size_t total_steps) {
  if (!cfg.cosine_decay || total_steps <= 1) return cfg.learning_rate;
  const double frac = static_cast<double>(step) / static_cast<double>(total_steps - 1);
  const double lo = cfg.learning_rate * cfg.min_lr_fraction;
  return lo + 0.5 * (cfg.learning_rate - lo) * (1.0 + std::cos(M_PI * frac));
}

double global_norm(const ModelParams& g) {
  double s = 0.0;
  g.visit([&](const std::string&, const auto& t) { s += t.squaredNorm(); });
  return std::sqrt(s);
}

std::optional<int> predict(const ModelParams& p, const chess::BoardState& s) {
  const auto l = logits(p, encode_board(s));
  if (l[0] == l[1]) return std::nullopt;
  return l[0] > l[1] ? 0 : 1;
}

double accuracy(const ModelParams& p, const std::vector<TrainingExample>& examples) {
  if (examples.empty()) throw ContractError("accuracy of an empty set");
  std::size_t hits = 0;
  for (const auto& e : examples)
    if (predict(p, e.state) == e.label) ++hits;
  return static_cast<double>(hits) / static_cast<double>(examples.size());
}

TrainResult train_epochs(ModelParams p, const std::vector<TrainingExample>& train,
                         const std::vector<TrainingExample>& heldout, const OptimizerConfig& cfg, std::uint64_t seed,
                         unsigned workers) {
  if (train.empty()) throw ContractError("training set is empty");
  auto opt = make_optimizer(cfg, p.arch);
  const std::size_t batch = static_cast<std::size_t>(cfg.batch_size);
  const std::size_t steps_per_epoch = (train.size() + batch - 1) / batch;
  const std::size_t total_steps = steps_per_epoch * static_cast<std::size_t>(cfg.epochs);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  TrainResult out;
  std::size_t step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(epoch)}));
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.uniform_index(i)]);

    double loss_sum = 0.0, weight_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch, ++step) {
      std::vector<TrainingExample> mb;
      double w = 0.0;
      for (std::size_t j = start; j < std::min(order.size(), start + batch); ++j) {
        mb.push_back(train[order[j]]);
        w += mb.back().weight;
      }
      LossAndGrad lg = loss_and_grad(p, mb, workers);
      if (!std::isfinite(lg.loss))
        throw NumericError("training diverged at epoch " + std::to_string(epoch) + " step " + std::to_string(step));
      if (cfg.clip_norm > 0.0) {
        const double norm = global_norm(lg.grad);
        if (norm > cfg.clip_norm) axpy(lg.grad, cfg.clip_norm / norm - 1.0, lg.grad);
      }
      opt->step(p, lg.grad, scheduled_rate(cfg, step, total_steps));
      if (!p.all_finite())
        throw NumericError("non-finite parameters after epoch " + std::to_string(epoch) + " step " +
                           std::to_string(step) + " (loss " + std::to_string(lg.loss) + ")");
      loss_sum += lg.loss * w;
      weight_sum += w;
    }
    EpochStats st;
    st.epoch = epoch;
    st.train_loss = loss_sum / weight_sum;
    st.train_accuracy = accuracy(p, train);
    if (!heldout.empty()) st.heldout_accuracy = accuracy(p, heldout);
    out.curve.push_back(st);
  }
  out.params = std::move(p);
  return out;
}

}  // namespace teamchess::rl
