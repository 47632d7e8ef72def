#include "teamchess/rl/model.hpp"

#include <cmath>

#include "teamchess/chess/movegen.hpp"
#include "teamchess/util/errors.hpp"
#include "teamchess/util/parallel.hpp"
#include "teamchess/util/rng.hpp"

namespace teamchess::rl {

Tokens encode_board(const chess::BoardState& s) {
  Tokens t{};
  t[0] = kClsToken;
  for (int sq = 0; sq < 64; ++sq) t[1 + sq] = kSquareTokenBase + static_cast<int>(s.placement[sq]);
  t[65] = kSideTokenBase + (s.side_to_move == chess::Color::White ? 0 : 1);
  t[66] = kCastlingTokenBase + s.castling.mask();
  t[67] = kCheckTokenBase + (chess::is_check(s) ? 1 : 0);
  return t;
}

void ArchSpec::validate() const {
  if (layers < 1 || heads < 1 || model_dim < 1 || ff_dim < 1) throw ConfigError("architecture sizes must be positive");
  if (model_dim % heads != 0) throw ConfigError("model_dim must be divisible by heads");
  if (vocab != kVocab || seq_len != kSeqLen) throw ConfigError("vocab and seq_len are fixed by the token scheme");
}

ModelParams zero_params(const ArchSpec& arch) {
  arch.validate();
  const int d = arch.model_dim, f = arch.ff_dim;
  ModelParams p;
  p.arch = arch;
  p.tok_emb = Matrix::Zero(arch.vocab, d);
  p.pos_emb = Matrix::Zero(arch.seq_len, d);
  p.layers.resize(arch.layers);
  for (auto& l : p.layers) {
    l.ln1_g = l.ln1_b = l.ln2_g = l.ln2_b = RowVector::Zero(d);
    l.wq = l.wk = l.wv = l.wo = Matrix::Zero(d, d);
    l.bq = l.bk = l.bv = l.bo = l.b2 = RowVector::Zero(d);
    l.w1 = Matrix::Zero(d, f);
    l.b1 = RowVector::Zero(f);
    l.w2 = Matrix::Zero(f, d);
  }
  p.lnf_g = p.lnf_b = RowVector::Zero(d);
  p.head_w = Matrix::Zero(d, 2);
  p.head_b = RowVector::Zero(2);
  return p;
}

ModelParams init_params(const ArchSpec& arch, std::uint64_t seed, double gain) {
  ModelParams p = zero_params(arch);
  Rng rng(seed);
  p.visit([&](const std::string& name, auto& t) {
    const auto dot = name.rfind('.');
    const std::string leaf = dot == std::string::npos ? name : name.substr(dot + 1);
    if (leaf.ends_with("_g")) {
      t.setOnes();
    } else if (leaf[0] == 'b' || leaf.ends_with("_b")) {
      t.setZero();
    } else {
      for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = gain * rng.normal();
    }
  });
  return p;
}

void axpy(ModelParams& a, double scale, const ModelParams& b) {
  std::vector<const double*> src;
  std::vector<Eigen::Index> sizes;
  b.visit([&](const std::string&, const auto& t) {
    src.push_back(t.data());
    sizes.push_back(t.size());
  });
  std::size_t i = 0;
  a.visit([&](const std::string&, auto& t) {
    if (sizes[i] != t.size()) throw ContractError("parameter shapes differ");
    for (Eigen::Index j = 0; j < t.size(); ++j) t.data()[j] += scale * src[i][j];
    ++i;
  });
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  visit([&](const std::string&, const auto& t) { n += static_cast<std::size_t>(t.size()); });
  return n;
}

bool ModelParams::all_finite() const {
  bool ok = true;
  visit([&](const std::string&, const auto& t) { ok = ok && t.allFinite(); });
  return ok;
}

namespace {

constexpr double kLnEps = 1e-5;
const double kGeluC = std::sqrt(2.0 / M_PI);

struct LnCache {
  Matrix xhat;
  Eigen::VectorXd rstd;
};

Matrix layer_norm(const Matrix& x, const RowVector& g, const RowVector& b, LnCache& c) {
  const Eigen::VectorXd mu = x.rowwise().mean();
  const Matrix xc = x.colwise() - mu;
  const Eigen::VectorXd var = xc.array().square().rowwise().mean();
  c.rstd = (var.array() + kLnEps).rsqrt();
  c.xhat = xc.array().colwise() * c.rstd.array();
  return (c.xhat.array().rowwise() * g.array()).rowwise() + b.array();
}

Matrix layer_norm_backward(const Matrix& dy, const RowVector& g, const LnCache& c, RowVector& dg, RowVector& db) {
  dg += (dy.array() * c.xhat.array()).colwise().sum().matrix();
  db += dy.colwise().sum();
  const Matrix dxhat = dy.array().rowwise() * g.array();
  const Eigen::VectorXd m1 = dxhat.rowwise().mean();
  const Eigen::VectorXd m2 = (dxhat.array() * c.xhat.array()).rowwise().mean();
  const Matrix centered = (dxhat.colwise() - m1).array() - c.xhat.array().colwise() * m2.array();
  return centered.array().colwise() * c.rstd.array();
}

double gelu(double x) { return 0.5 * x * (1.0 + std::tanh(kGeluC * (x + 0.044715 * x * x * x))); }

double gelu_grad(double x) {
  const double t = std::tanh(kGeluC * (x + 0.044715 * x * x * x));
  return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * kGeluC * (1.0 + 3.0 * 0.044715 * x * x);
}

struct LayerCache {
  LnCache ln1, ln2;
  Matrix a, q, k, v, o, b, h, g;
  std::vector<Matrix> p;
};

struct Cache {
  std::vector<LayerCache> layers;
  LnCache lnf;
  Matrix z;  // 1 x d
};

/// With `cls_only` the last layer computes only the CLS row, which is all the
/// logits depend on; attention maps are then not reported.
ForwardResult run_forward(const ModelParams& p, const Tokens& tokens, Cache& cache, bool cls_only) {
  const ArchSpec& arch = p.arch;
  const int n = arch.seq_len, d = arch.model_dim, dh = d / arch.heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  Matrix x(n, d);
  for (int i = 0; i < n; ++i) {
    if (tokens[i] < 0 || tokens[i] >= arch.vocab) throw ContractError("token id out of range");
    x.row(i) = p.tok_emb.row(tokens[i]) + p.pos_emb.row(i);
  }
  ForwardResult out;
  if (!cls_only) out.attention.reserve(static_cast<std::size_t>(arch.layers * arch.heads));
  cache.layers.resize(p.layers.size());
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const LayerParams& lp = p.layers[l];
    LayerCache& c = cache.layers[l];
    const int r = cls_only && l + 1 == p.layers.size() ? 1 : n;
    c.a = layer_norm(x, lp.ln1_g, lp.ln1_b, c.ln1);
    c.q = (c.a.topRows(r) * lp.wq).rowwise() + lp.bq;
    c.k = (c.a * lp.wk).rowwise() + lp.bk;
    c.v = (c.a * lp.wv).rowwise() + lp.bv;
    c.o.resize(r, d);
    c.p.resize(arch.heads);
    for (int h = 0; h < arch.heads; ++h) {
      Matrix s = c.q.middleCols(h * dh, dh) * c.k.middleCols(h * dh, dh).transpose() * scale;
      const Eigen::VectorXd mx = s.rowwise().maxCoeff();
      s = (s.colwise() - mx).array().exp();
      const Eigen::VectorXd sum = s.rowwise().sum();
      s = s.array().colwise() / sum.array();
      c.o.middleCols(h * dh, dh) = s * c.v.middleCols(h * dh, dh);
      c.p[h] = s;
      if (!cls_only) out.attention.push_back(s);
    }
    Matrix y = x.topRows(r) + ((c.o * lp.wo).rowwise() + lp.bo);
    c.b = layer_norm(y, lp.ln2_g, lp.ln2_b, c.ln2);
    c.h = (c.b * lp.w1).rowwise() + lp.b1;
    c.g = c.h.unaryExpr([](double v) { return gelu(v); });
    y += (c.g * lp.w2).rowwise() + lp.b2;
    x = std::move(y);
  }
  cache.z = layer_norm(x.topRows(1), p.lnf_g, p.lnf_b, cache.lnf);
  const RowVector logits = cache.z * p.head_w + p.head_b;
  out.logits = {logits(0), logits(1)};
  if (!std::isfinite(out.logits[0]) || !std::isfinite(out.logits[1])) throw NumericError("non-finite logits");
  return out;
}

void run_backward(const ModelParams& p, const Tokens& tokens, const Cache& cache, const std::array<double, 2>& dlogits,
                  ModelParams& g) {
  const ArchSpec& arch = p.arch;
  const int n = arch.seq_len, d = arch.model_dim, dh = d / arch.heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  RowVector dl(2);
  dl << dlogits[0], dlogits[1];
  g.head_w += cache.z.transpose() * dl;
  g.head_b += dl;
  const Matrix dz = dl * p.head_w.transpose();
  // Gradient with respect to the residual stream leaving the top layer.
  Matrix dx = Matrix::Zero(cache.layers.back().q.rows(), d);
  dx.topRows(1) = layer_norm_backward(dz, p.lnf_g, cache.lnf, g.lnf_g, g.lnf_b);

  for (std::size_t li = p.layers.size(); li-- > 0;) {
    const LayerParams& lp = p.layers[li];
    const LayerCache& c = cache.layers[li];
    LayerParams& lg = g.layers[li];
    const Eigen::Index r = c.q.rows();
    lg.w2 += c.g.transpose() * dx;
    lg.b2 += dx.colwise().sum();
    const Matrix dh_ = (dx * lp.w2.transpose()).cwiseProduct(c.h.unaryExpr([](double v) { return gelu_grad(v); }));
    lg.w1 += c.b.transpose() * dh_;
    lg.b1 += dh_.colwise().sum();
    dx += layer_norm_backward(dh_ * lp.w1.transpose(), lp.ln2_g, c.ln2, lg.ln2_g, lg.ln2_b);

    lg.wo += c.o.transpose() * dx;
    lg.bo += dx.colwise().sum();
    const Matrix d_o = dx * lp.wo.transpose();
    Matrix dq(r, d), dk(n, d), dv(n, d);
    for (int h = 0; h < arch.heads; ++h) {
      const Matrix& P = c.p[h];
      const auto doh = d_o.middleCols(h * dh, dh);
      const Matrix dp = doh * c.v.middleCols(h * dh, dh).transpose();
      dv.middleCols(h * dh, dh) = P.transpose() * doh;
      const Eigen::VectorXd inner = (dp.array() * P.array()).rowwise().sum();
      const Matrix ds = (P.array() * (dp.colwise() - inner).array()).matrix() * scale;
      dq.middleCols(h * dh, dh) = ds * c.k.middleCols(h * dh, dh);
      dk.middleCols(h * dh, dh) = ds.transpose() * c.q.middleCols(h * dh, dh);
    }
    lg.wq += c.a.topRows(r).transpose() * dq;
    lg.wk += c.a.transpose() * dk;
    lg.wv += c.a.transpose() * dv;
    lg.bq += dq.colwise().sum();
    lg.bk += dk.colwise().sum();
    lg.bv += dv.colwise().sum();
    Matrix da = dk * lp.wk.transpose() + dv * lp.wv.transpose();
    da.topRows(r) += dq * lp.wq.transpose();
    Matrix dx_in = layer_norm_backward(da, lp.ln1_g, c.ln1, lg.ln1_g, lg.ln1_b);
    dx_in.topRows(r) += dx;
    dx = std::move(dx_in);
  }
  for (int i = 0; i < n; ++i) g.tok_emb.row(tokens[i]) += dx.row(i);
  g.pos_emb += dx;
}

/// Cross-entropy of softmax(logits) against `label` and its logit gradient.
double cross_entropy(const std::array<double, 2>& logits, int label, std::array<double, 2>& dlogits) {
  const double m = std::max(logits[0], logits[1]);
  const double lse = m + std::log(std::exp(logits[0] - m) + std::exp(logits[1] - m));
  for (int i = 0; i < 2; ++i) dlogits[i] = std::exp(logits[i] - lse) - (i == label ? 1.0 : 0.0);
  return lse - logits[label];
}

double total_weight(const std::vector<TrainingExample>& batch) {
  if (batch.empty()) throw ContractError("batch must be non-empty");
  double w = 0.0;
  for (const auto& e : batch) {
    if (e.label != 0 && e.label != 1) throw ContractError("label must be 0 or 1");
    if (!(e.weight > 0.0)) throw ContractError("example weights must be positive");
    w += e.weight;
  }
  return w;
}

}  // namespace

ForwardResult forward(const ModelParams& p, const Tokens& tokens) {
  Cache cache;
  return run_forward(p, tokens, cache, false);
}

std::array<double, 2> logits(const ModelParams& p, const Tokens& tokens) {
  Cache cache;
  return run_forward(p, tokens, cache, true).logits;
}

LossAndGrad loss_and_grad(const ModelParams& p, const std::vector<TrainingExample>& batch, unsigned workers) {
  const double wsum = total_weight(batch);
  std::vector<ModelParams> grads(batch.size());
  std::vector<double> losses(batch.size());
  parallel_for(batch.size(), workers, [&](std::size_t i) {
    const auto& e = batch[i];
    const Tokens t = encode_board(e.state);
    Cache cache;
    const ForwardResult f = run_forward(p, t, cache, true);
    std::array<double, 2> dl{};
    losses[i] = e.weight * cross_entropy(f.logits, e.label, dl);
    const double s = e.weight / wsum;
    dl[0] *= s;
    dl[1] *= s;
    grads[i] = zero_params(p.arch);
    run_backward(p, t, cache, dl, grads[i]);
  });
  LossAndGrad out{0.0, zero_params(p.arch)};
  for (std::size_t i = 0; i < batch.size(); ++i) {
    out.loss += losses[i];
    axpy(out.grad, 1.0, grads[i]);
  }
  out.loss /= wsum;
  if (!std::isfinite(out.loss)) throw NumericError("non-finite loss");
  return out;
}

double loss(const ModelParams& p, const std::vector<TrainingExample>& batch) {
  const double wsum = total_weight(batch);
  double total = 0.0;
  std::array<double, 2> dl{};
  Cache cache;
  for (const auto& e : batch)
    total += e.weight * cross_entropy(run_forward(p, encode_board(e.state), cache, true).logits, e.label, dl);
  return total / wsum;
}

std::array<double, 64> cls_square_attention(const ForwardResult& f) {
  std::array<double, 64> out{};
  for (const Matrix& a : f.attention)
    for (int sq = 0; sq < 64; ++sq) out[sq] += a(0, 1 + sq);
  for (double& v : out) v /= static_cast<double>(f.attention.size());
  return out;
}

}  // namespace teamchess::rl
