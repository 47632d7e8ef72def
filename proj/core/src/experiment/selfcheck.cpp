#include "teamchess/experiment/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "teamchess/analysis/stats.hpp"
#include "teamchess/chess/fen.hpp"
#include "teamchess/chess/movegen.hpp"
#include "teamchess/rl/model.hpp"
#include "teamchess/util/errors.hpp"
#include "teamchess/util/rng.hpp"

namespace teamchess::experiment {

Fault fault_from_string(const std::string& s) {
  if (s == "none") return Fault::None;
  if (s == "movegen") return Fault::Movegen;
  if (s == "gradient") return Fault::Gradient;
  if (s == "stats") return Fault::Stats;
  throw ConfigError("unknown fault '" + s + "' (expected none, movegen, gradient or stats)");
}

bool SelfcheckReport::passed() const {
  return !lines.empty() && std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.pass; });
}

namespace {

struct PerftCase {
  const char* name;
  const char* fen;
  std::vector<std::uint64_t> counts;  // depth 1, 2, ...
};

const std::vector<PerftCase>& perft_cases() {
  static const std::vector<PerftCase> cases = {
      {"initial", "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1", {20, 400, 8902, 197281}},
      {"kiwipete", "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1", {48, 2039, 97862}},
      {"endgame", "8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 0 1", {14, 191, 2812, 43238}},
      {"promotions", "r3k2r/Pppp1ppp/1b3nbN/nP6/BBP1P3/q4N2/Pp1P2PP/R2Q1RK1 w kq - 0 1", {6, 264, 9467}},
  };
  return cases;
}

bool is_castle(const chess::BoardState& s, const chess::Move& m) {
  const chess::Cell c = s.at(m.from);
  return (c == chess::Cell::WhiteKing || c == chess::Cell::BlackKing) && std::abs(m.to - m.from) == 2;
}

std::uint64_t counted_perft(const chess::BoardState& s, int depth, Fault fault) {
  if (fault != Fault::Movegen) return chess::perft(s, depth);
  if (depth == 0) return 1;
  std::uint64_t n = 0;
  for (const auto& m : chess::legal_moves(s)) {
    if (is_castle(s, m)) continue;
    n += counted_perft(chess::apply_move_unchecked(s, m), depth - 1, fault);
  }
  return n;
}

std::vector<CheckLine> perft_checks(Fault fault) {
  std::vector<CheckLine> out;
  for (const auto& c : perft_cases()) {
    const auto s = chess::parse_fen(c.fen);
    CheckLine line{"perft " + std::string(c.name), true, ""};
    for (std::size_t d = 1; d <= c.counts.size(); ++d) {
      const std::uint64_t got = counted_perft(s, static_cast<int>(d), fault);
      if (got != c.counts[d - 1]) {
        line.pass = false;
        line.detail = "depth " + std::to_string(d) + ": expected " + std::to_string(c.counts[d - 1]) + ", got " +
                      std::to_string(got) + " (" + c.fen + ")";
        break;
      }
    }
    if (line.pass) line.detail = "depths 1-" + std::to_string(c.counts.size()) + " match";
    out.push_back(std::move(line));
  }
  return out;
}

std::vector<CheckLine> gradient_checks(Fault fault) {
  rl::ArchSpec a;
  a.layers = 2;
  a.heads = 2;
  a.model_dim = 8;
  a.ff_dim = 12;
  const rl::ModelParams p = rl::init_params(a, 5, 0.4);
  std::vector<rl::TrainingExample> batch;
  chess::BoardState s = chess::BoardState::initial();
  Rng rng(3);
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 7; ++k) {
      const auto moves = chess::legal_moves(s);
      s = chess::apply_move_unchecked(s, moves[rng.uniform_index(moves.size())]);
    }
    batch.push_back({s, i % 2, 0.5 + i});
  }
  rl::LossAndGrad lg = rl::loss_and_grad(p, batch);
  if (fault == Fault::Gradient) lg.grad.head_w(0, 0) += 0.01;

  std::vector<std::vector<double>> analytic;
  lg.grad.visit([&](const std::string&, const auto& t) { analytic.emplace_back(t.data(), t.data() + t.size()); });
  std::vector<CheckLine> out;
  constexpr double h = 1e-5;
  std::size_t idx = 0;
  rl::ModelParams q = p;
  q.visit([&](const std::string& name, auto& t) {
    const auto& g = analytic[idx++];
    double worst = 0.0;
    for (Eigen::Index j = 0; j < t.size(); ++j) {
      const double orig = t.data()[j];
      t.data()[j] = orig + h;
      const double up = rl::loss(q, batch);
      t.data()[j] = orig - h;
      const double down = rl::loss(q, batch);
      t.data()[j] = orig;
      const double numeric = (up - down) / (2 * h);
      worst = std::max(worst, std::abs(numeric - g[static_cast<std::size_t>(j)]) /
                                  std::max(1e-3, std::abs(numeric) + std::abs(g[static_cast<std::size_t>(j)])));
    }
    std::ostringstream os;
    os << "max relative error " << worst;
    out.push_back({"gradient " + name, worst < 1e-4, os.str()});
  });
  return out;
}

std::vector<CheckLine> stats_checks(Fault fault) {
  std::vector<CheckLine> out;
  // z against the closed form on hand-made score vectors.
  const auto m1 = team::MatchStatistics::from_scores({1, 1, 0.5, 0, 1, 0.5, 1, 0});
  const auto m2 = team::MatchStatistics::from_scores({0, 0.5, 0.5, 0, 1, 0, 0, 0.5});
  auto z = analysis::wdl_z_test(m1, m2).z;
  if (fault == Fault::Stats) z = -z;
  const double expect = (m1.wdl - m2.wdl) / std::sqrt(m1.sem * m1.sem + m2.sem * m2.sem);
  out.push_back({"stats z-test", std::abs(z - expect) < 1e-10, "z = " + std::to_string(z)});

  // A_w by pair counting vs the rank path, and its complement identity.
  Rng rng(11);
  double worst = 0.0;
  for (int c = 0; c < 100; ++c) {
    std::vector<double> x(3 + rng.uniform_index(20)), y(3 + rng.uniform_index(20));
    for (auto& v : x) v = static_cast<double>(rng.uniform_index(7));
    for (auto& v : y) v = static_cast<double>(rng.uniform_index(7));
    const double pw = analysis::a_w_pairwise(x, y), rk = analysis::a_w_ranked(x, y);
    worst = std::max({worst, std::abs(pw - rk), std::abs(pw + analysis::a_w_pairwise(y, x) - 1.0)});
  }
  out.push_back({"stats A_w", worst < 1e-12, "max deviation " + std::to_string(worst)});

  // OLS slope and intercept against the normal equations.
  const std::vector<double> xs{0.1, 0.3, 0.35, 0.6, 0.8, 0.95}, ys{0.2, 0.22, 0.3, 0.33, 0.41, 0.4};
  const auto r = analysis::trend_regression(xs, ys);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icept = (sy - slope * sx) / n;
  const bool ok = std::abs(r.slope - slope) < 1e-10 && std::abs(r.intercept - icept) < 1e-10 && r.ci_low <= r.slope &&
                  r.slope <= r.ci_high && r.p >= 0 && r.p <= 1;
  out.push_back({"stats regression", ok, "slope " + std::to_string(r.slope) + ", p " + std::to_string(r.p)});
  return out;
}

}  // namespace

SelfcheckReport run_selfcheck(Fault fault, const std::function<void(const CheckLine&)>& on_line) {
  SelfcheckReport rep;
  auto add = [&](std::vector<CheckLine> lines) {
    for (auto& l : lines) {
      if (on_line) on_line(l);
      rep.lines.push_back(std::move(l));
    }
  };
  add(perft_checks(fault));
  add(gradient_checks(fault));
  add(stats_checks(fault));
  return rep;
}

}  // namespace teamchess::experiment
