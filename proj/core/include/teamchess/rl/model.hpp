#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "teamchess/chess/board.hpp"

namespace teamchess::rl {

using Matrix = Eigen::MatrixXd;
using RowVector = Eigen::RowVectorXd;

/// Token layout: 0 CLS, 1-64 squares a1..h8, 65 side to move, 66 castling
/// mask, 67 check flag. Each slot family has its own id range.
inline constexpr int kSeqLen = 68;
inline constexpr int kClsToken = 0;
inline constexpr int kSquareTokenBase = 1;    // + cell (13 symbols)
inline constexpr int kSideTokenBase = 14;     // + 0 white, 1 black
inline constexpr int kCastlingTokenBase = 16; // + mask (WK 1, WQ 2, BK 4, BQ 8)
inline constexpr int kCheckTokenBase = 32;    // + 0 / 1
inline constexpr int kVocab = 34;

using Tokens = std::array<int, kSeqLen>;

Tokens encode_board(const chess::BoardState& s);

struct ArchSpec {
  int layers = 2;
  int heads = 4;
  int model_dim = 64;
  int ff_dim = 128;
  int vocab = kVocab;
  int seq_len = kSeqLen;

  /// Throws ConfigError on an inconsistent spec.
  void validate() const;
  friend bool operator==(const ArchSpec&, const ArchSpec&) = default;
};

struct LayerParams {
  RowVector ln1_g, ln1_b;
  Matrix wq, wk, wv, wo;  // model_dim x model_dim, applied as X * W
  RowVector bq, bk, bv, bo;
  RowVector ln2_g, ln2_b;
  Matrix w1;  // model_dim x ff_dim
  RowVector b1;
  Matrix w2;  // ff_dim x model_dim
  RowVector b2;
};

struct ModelParams {
  ArchSpec arch;
  Matrix tok_emb;  // vocab x model_dim
  Matrix pos_emb;  // seq_len x model_dim, learned
  std::vector<LayerParams> layers;
  RowVector lnf_g, lnf_b;
  Matrix head_w;  // model_dim x 2
  RowVector head_b;

  /// Calls f(name, tensor) for every array in a fixed order.
  template <typename F>
  void visit(F&& f) {
    visit_impl(*this, f);
  }
  template <typename F>
  void visit(F&& f) const {
    visit_impl(*this, f);
  }

  std::size_t parameter_count() const;
  bool all_finite() const;

 private:
  template <typename Self, typename F>
  static void visit_impl(Self& p, F& f) {
    f("tok_emb", p.tok_emb);
    f("pos_emb", p.pos_emb);
    for (std::size_t i = 0; i < p.layers.size(); ++i) {
      auto& l = p.layers[i];
      const std::string pre = "layer" + std::to_string(i) + ".";
      f(pre + "ln1_g", l.ln1_g);
      f(pre + "ln1_b", l.ln1_b);
      f(pre + "wq", l.wq);
      f(pre + "bq", l.bq);
      f(pre + "wk", l.wk);
      f(pre + "bk", l.bk);
      f(pre + "wv", l.wv);
      f(pre + "bv", l.bv);
      f(pre + "wo", l.wo);
      f(pre + "bo", l.bo);
      f(pre + "ln2_g", l.ln2_g);
      f(pre + "ln2_b", l.ln2_b);
      f(pre + "w1", l.w1);
      f(pre + "b1", l.b1);
      f(pre + "w2", l.w2);
      f(pre + "b2", l.b2);
    }
    f("lnf_g", p.lnf_g);
    f("lnf_b", p.lnf_b);
    f("head_w", p.head_w);
    f("head_b", p.head_b);
  }
};

/// Same shapes as `arch`, every entry zero.
ModelParams zero_params(const ArchSpec& arch);

/// Weights and embeddings ~ N(0, gain^2); biases 0; layer-norm gains 1.
ModelParams init_params(const ArchSpec& arch, std::uint64_t seed, double gain = 0.02);

/// a += scale * b, tensor by tensor.
void axpy(ModelParams& a, double scale, const ModelParams& b);

struct ForwardResult {
  std::array<double, 2> logits{};
  /// attention[layer * heads + head] is a seq_len x seq_len row-stochastic matrix.
  std::vector<Matrix> attention;
};

/// Pre-norm transformer encoder; the logits come from the final layer-normed
/// CLS row through the classifier head. Throws NumericError on non-finite
/// activations.
ForwardResult forward(const ModelParams& p, const Tokens& tokens);

/// Logits only; skips the work that only the attention maps need.
std::array<double, 2> logits(const ModelParams& p, const Tokens& tokens);

struct TrainingExample {
  chess::BoardState state;
  int label = 0;  // 0 -> member 1, 1 -> member 2
  double weight = 1.0;
};

struct LossAndGrad {
  double loss = 0.0;
  ModelParams grad;
};

/// Weighted mean cross-entropy sum(w_i * CE_i) / sum(w_i) and its exact
/// gradient. Per-example gradients are accumulated in batch order.
LossAndGrad loss_and_grad(const ModelParams& p, const std::vector<TrainingExample>& batch, unsigned workers = 1);

/// Loss only.
double loss(const ModelParams& p, const std::vector<TrainingExample>& batch);

/// Per-square CLS attention (tokens 1..64, i.e. a1..h8) averaged over layers
/// and heads, without renormalization.
std::array<double, 64> cls_square_attention(const ForwardResult& f);

}  // namespace teamchess::rl
