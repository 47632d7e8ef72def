#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "brute_perft.hpp"
#include "fixtures.hpp"
#include "stats_oracles.hpp"
#include "teamchess/analysis/attention.hpp"
#include "teamchess/analysis/stats.hpp"
#include "teamchess/chess/fen.hpp"
#include "teamchess/chess/movegen.hpp"
#include "teamchess/engines/builtin.hpp"
#include "teamchess/experiment/commands.hpp"
#include "teamchess/experiment/config.hpp"
#include "teamchess/experiment/manifest.hpp"
#include "teamchess/rl/model.hpp"
#include "teamchess/rl/train.hpp"
#include "teamchess/team/game.hpp"
#include "teamchess/team/manager.hpp"
#include "teamchess/team/records.hpp"
#include "teamchess/util/io.hpp"
#include "teamchess/util/rng.hpp"

using namespace teamchess;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Check {
  std::string name;
  double budget_s;  // 0 = no runtime bound
  std::function<Outcome()> run;
};

fs::path g_out;

std::string num(double v, int prec = 4) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

experiment::CommandContext context_for(const std::string& config_name, const std::string& tag) {
  experiment::CommandContext ctx;
  ctx.config = experiment::load_config(fixtures::source_dir() / "configs" / config_name);
  ctx.config.output_dir = g_out / tag;
  ctx.log = [tag](const std::string& m) { std::cerr << "  [" << tag << "] " << m << "\n"; };
  return ctx;
}

std::string manifest_hash(const fs::path& dir) {
  return experiment::read_manifest(dir / experiment::kManifestName).content_hash();
}

Outcome perft_check() {
  struct Pos {
    const char* name;
    const char* fen;
  };
  const Pos positions[] = {
      {"initial", "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1"},
      {"kiwipete", "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1"},
      {"promotions", "r3k2r/Pppp1ppp/1b3nbN/nP6/BBP1P3/q4N2/Pp1P2PP/R2Q1RK1 w kq - 0 1"},
  };
  std::ostringstream os;
  bool ok = true;
  for (const auto& p : positions) {
    const auto s = chess::parse_fen(p.fen);
    for (int d = 1; d <= 4; ++d) {
      const auto lib = chess::perft(s, d);
      const auto ref = oracle::brute_perft(p.fen, d);
      if (lib != ref) {
        ok = false;
        os << p.name << " d" << d << " " << lib << " vs " << ref << "; ";
      }
      if (d == 4) os << p.name << " d4 " << lib << "; ";
    }
  }
  return {ok, os.str()};
}

Outcome gradient_check() {
  rl::ArchSpec a;
  a.layers = 2;
  a.heads = 2;
  a.model_dim = 8;
  a.ff_dim = 16;
  const rl::ModelParams p = rl::init_params(a, 11, 0.5);
  std::vector<rl::TrainingExample> batch;
  const auto positions = fixtures::sample_positions(4, 17);
  for (std::size_t i = 0; i < positions.size(); ++i) batch.push_back({positions[i], static_cast<int>(i % 2), 1.0 + 0.5 * i});
  const rl::LossAndGrad lg = rl::loss_and_grad(p, batch);

  std::vector<std::vector<double>> analytic;
  lg.grad.visit([&](const std::string&, const auto& t) { analytic.emplace_back(t.data(), t.data() + t.size()); });
  constexpr double h = 1e-5;
  double worst = 0.0;
  std::string worst_name;
  int tensors = 0;
  std::size_t idx = 0;
  rl::ModelParams q = p;
  q.visit([&](const std::string& name, auto& t) {
    ++tensors;
    const auto& g = analytic[idx++];
    for (Eigen::Index j = 0; j < t.size(); ++j) {
      const double orig = t.data()[j];
      t.data()[j] = orig + h;
      const double up = rl::loss(q, batch);
      t.data()[j] = orig - h;
      const double down = rl::loss(q, batch);
      t.data()[j] = orig;
      const double numeric = (up - down) / (2 * h);
      const double an = g[static_cast<std::size_t>(j)];
      const double rel = std::abs(numeric - an) / std::max(1e-3, std::abs(numeric) + std::abs(an));
      if (rel > worst) {
        worst = rel;
        worst_name = name;
      }
    }
  });
  return {worst < 1e-4, std::to_string(tensors) + " tensors, max relative error " + num(worst, 3) + " (" + worst_name + ")"};
}

Outcome attention_rows_check() {
  const rl::ArchSpec arch;
  const auto positions = fixtures::sample_positions(100, 23);
  double worst = 0.0;
  std::size_t rows = 0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const auto p = rl::init_params(arch, 1000 + i, i % 2 ? 1.0 : 0.02);
    const auto f = rl::forward(p, rl::encode_board(positions[i]));
    for (const auto& m : f.attention) {
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        worst = std::max(worst, std::abs(m.row(r).sum() - 1.0));
        ++rows;
      }
    }
  }
  return {worst <= 1e-6, std::to_string(rows) + " rows over 100 inputs, max |sum - 1| " + num(worst, 3)};
}

std::string trajectory(const team::GameRecord& g) {
  std::string s;
  for (const auto& m : g.moves) s += m.uci() + " ";
  s += g.outcome ? chess::to_string(g.outcome->kind) + "/" + chess::to_string(g.outcome->reason) : "none";
  return s;
}

Outcome team_equivalence_check() {
  const std::string l = "builtin:alphabeta?depth=2&profile=lstyle";
  const std::string m = "builtin:alphabeta?depth=2&profile=mstyle";
  const std::string adv = "builtin:alphabeta?depth=1&profile=neutral&epsilon=0.1&seed=9";
  auto ops = fixtures::bundled_openings();
  ops.resize(25);
  auto mk = [](const std::string& uri) { return engines::BuiltinEngine(engines::parse_builtin_uri(uri)); };
  int games = 0, mismatches = 0, closure_disagreements = 0, constant_disagreements = 0, wrong_choice = 0;

  // Identical members under a coin-flip manager never disagree and replay the solo game.
  {
    auto m1 = mk(l), m2 = mk(l), solo = mk(l), a = mk(adv);
    team::RandomManager manager;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      team::GameSetup setup;
      setup.start = ops[i];
      setup.team_color = i % 2 ? chess::Color::Black : chess::Color::White;
      setup.seed = team::game_seed(5, i, setup.team_color);
      const auto t = team::play_team_game(m1, m2, manager, a, setup);
      const auto s = team::play_solo_game(solo, a, setup);
      closure_disagreements += static_cast<int>(t.disagreements.size());
      if (trajectory(t) != trajectory(s)) ++mismatches;
      ++games;
    }
  }
  // A constant manager replays the member it always picks.
  {
    auto m1 = mk(l), m2 = mk(m), a = mk(adv);
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const auto k = i % 2 ? team::MemberId::Two : team::MemberId::One;
      team::ConstantManager manager(k);
      team::GameSetup setup;
      setup.start = ops[i];
      setup.team_color = (i / 2) % 2 ? chess::Color::Black : chess::Color::White;
      setup.seed = team::game_seed(6, i, setup.team_color);
      const auto t = team::play_team_game(m1, m2, manager, a, setup);
      const auto s = team::play_solo_game(k == team::MemberId::One ? m1 : m2, a, setup);
      for (const auto& d : t.disagreements) wrong_choice += d.chosen != k;
      constant_disagreements += static_cast<int>(t.disagreements.size());
      if (trajectory(t) != trajectory(s)) ++mismatches;
      ++games;
    }
  }
  const bool ok = mismatches == 0 && closure_disagreements == 0 && wrong_choice == 0 && constant_disagreements > 0;
  return {ok, std::to_string(games) + " games, " + std::to_string(mismatches) + " trajectory mismatches, " +
                  std::to_string(closure_disagreements) + " disagreements between identical members, " +
                  std::to_string(constant_disagreements) + " overridden disagreements under constant managers"};
}

Outcome stats_oracle_check() {
  Rng rng(31);
  double a_err = 0.0, complement_err = 0.0, transform_err = 0.0, ols_err = 0.0, z_err = 0.0, wdl_err = 0.0;
  for (int c = 0; c < 100; ++c) {
    const std::size_t na = 1 + rng.uniform_index(40), nb = 1 + rng.uniform_index(40);
    const bool coarse = c % 2 == 0;  // coarse values produce ties
    auto draw = [&] { return coarse ? static_cast<double>(rng.uniform_index(6)) : rng.uniform01() * 3 - 1; };
    std::vector<double> a(na), b(nb);
    for (auto& v : a) v = draw() + (c % 3 == 0 ? 0.5 : 0.0);
    for (auto& v : b) v = draw();
    const double pair = analysis::a_w_pairwise(a, b);
    const double rank = analysis::a_w_ranked(a, b);
    const double brute = oracle::a_by_enumeration(a, b);
    a_err = std::max({a_err, std::abs(pair - brute), std::abs(rank - brute)});
    complement_err = std::max(complement_err, std::abs(rank + analysis::a_w_ranked(b, a) - 1.0));
    auto f = [](double x) { return std::exp(x) + x * x * x; };
    std::vector<double> fa, fb;
    for (double v : a) fa.push_back(f(v));
    for (double v : b) fb.push_back(f(v));
    transform_err = std::max(transform_err, std::abs(analysis::a_w_ranked(fa, fb) - rank));

    const std::size_t n = 3 + rng.uniform_index(30);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.uniform01();
      y[i] = 0.3 + 0.1 * x[i] + 0.05 * (rng.uniform01() - 0.5);
    }
    const auto r = analysis::trend_regression(x, y);
    const auto o = oracle::ols_qr(x, y);
    ols_err = std::max({ols_err, std::abs(r.slope - o.slope), std::abs(r.intercept - o.intercept),
                        std::abs(r.slope_se - o.slope_se), std::abs(r.ci_low - o.ci_low),
                        std::abs(r.ci_high - o.ci_high), std::abs(r.p - o.p)});

    std::vector<double> s1, s2;
    for (int i = 0; i < 20 + c; ++i) s1.push_back(0.5 * rng.uniform_index(3));
    for (int i = 0; i < 30 + c; ++i) s2.push_back(0.5 * rng.uniform_index(3));
    const auto m1 = team::MatchStatistics::from_scores(s1);
    const auto m2 = team::MatchStatistics::from_scores(s2);
    auto mean_sem = [](const std::vector<double>& s) {
      double mu = 0.0;
      for (double v : s) mu += v;
      mu /= static_cast<double>(s.size());
      double ss = 0.0;
      for (double v : s) ss += (v - mu) * (v - mu);
      return std::pair(mu, std::sqrt(ss / static_cast<double>(s.size() - 1)) / std::sqrt(static_cast<double>(s.size())));
    };
    const auto [mu1, se1] = mean_sem(s1);
    const auto [mu2, se2] = mean_sem(s2);
    const double w1 = (m1.wins + 0.5 * m1.draws) / m1.games();
    wdl_err = std::max({wdl_err, std::abs(m1.wdl - mu1), std::abs(m1.wdl - w1), std::abs(m2.wdl - mu2)});
    z_err = std::max(z_err, std::abs(analysis::wdl_z_test(m1, m2).z - (mu1 - mu2) / std::sqrt(se1 * se1 + se2 * se2)));
  }
  const double worst = std::max({a_err, complement_err, transform_err, ols_err, z_err, wdl_err});
  return {worst <= 1e-10, "100 cases; max errors A_w " + num(a_err, 2) + ", complement " + num(complement_err, 2) +
                              ", monotone transform " + num(transform_err, 2) + ", OLS " + num(ols_err, 2) + ", Z " +
                              num(z_err, 2) + ", WDL " + num(wdl_err, 2)};
}

Outcome side_to_move_check() {
  auto build = [](std::size_t n, std::uint64_t seed) {
    std::vector<rl::TrainingExample> out;
    for (const auto& s : fixtures::sample_positions(n, seed))
      out.push_back({s, s.side_to_move == chess::Color::White ? 0 : 1, 1.0});
    return out;
  };
  const auto train = build(200, 41);
  const auto heldout = build(400, 43);
  rl::OptimizerConfig cfg;
  cfg.kind = rl::OptimizerKind::Adam;
  cfg.learning_rate = 1e-3;
  cfg.epochs = 30;
  const auto r = rl::train_epochs(rl::init_params(rl::ArchSpec{}, 47), train, heldout, cfg, 53);
  int first = -1;
  double best = 0.0;
  for (const auto& e : r.curve) {
    best = std::max(best, *e.heldout_accuracy);
    if (first < 0 && *e.heldout_accuracy > 0.95) first = e.epoch;
  }
  const double final_acc = *r.curve.back().heldout_accuracy;
  return {first >= 0, "default architecture, Adam lr 1e-3, 200 train / 400 held-out; first epoch above 0.95: " +
                          (first < 0 ? std::string("none") : std::to_string(first + 1)) + ", final accuracy " +
                          num(final_acc) + ", best " + num(best)};
}

fs::path g_rigged_train;

Outcome rigged_check() {
  auto ctx = context_for("rigged.json", "rigged");
  g_rigged_train = experiment::cmd_train_manager(ctx);
  const auto state = json::parse(read_file(g_rigged_train / "state.json"));
  const auto& reports = state.at("reports");
  std::string curve;
  for (const auto& r : reports) curve += num(r.at("heldout_routing_accuracy").get<double>(), 3) + " ";
  const double last = reports.back().at("heldout_routing_accuracy").get<double>();
  const bool ok = reports.size() == 3 && ctx.config.openings.count >= 100 && last > 0.8;
  return {ok, std::to_string(ctx.config.openings.count) + " openings, held-out routing accuracy by iteration: " + curve +
                  "(final " + num(last, 3) + ")"};
}

Outcome attention_controls_check() {
  if (g_rigged_train.empty()) return {false, "no trained rigged checkpoint"};
  auto ctx = context_for("rigged.json", "rigged");
  const auto dir = experiment::cmd_analyze(ctx, g_rigged_train / "manager.ckpt");
  const auto report = json::parse(read_file(dir / "report.json"));
  std::optional<double> untrained;
  std::size_t untrained_n = 0;
  std::set<std::string> trained_groupings;
  std::ostringstream os;
  for (const auto& s : report.at("studies")) {
    const auto g = s.at("grouping").get<std::string>();
    const auto c = s.at("control").get<std::string>();
    if (g == "piece-vs-empty" && c == "untrained") {
      untrained = s.at("a_w").get<double>();
      untrained_n = s.at("samples").get<std::size_t>();
    }
    if (c == "none") {
      trained_groupings.insert(g);
      os << "trained " << g << " A_w " << num(s.at("a_w").get<double>()) << "; ";
    }
  }
  const bool both = trained_groupings.count("piece-vs-empty") && trained_groupings.count("attacked-vs-not");
  const bool ok = untrained && untrained_n >= 1000 && std::abs(*untrained - 0.5) <= 0.05 && both;
  os << "untrained piece-vs-empty A_w " << (untrained ? num(*untrained) : "missing") << " over " << untrained_n
     << " positions";
  return {ok, os.str()};
}

Outcome ladder_check() {
  auto ctx = context_for("ladder.json", "ladder");
  const auto dir = experiment::cmd_run_match(ctx);
  const auto digest = experiment::cmd_report(ctx.config.output_dir);
  write_file_atomic(g_out / "ladder_report.txt", digest.text);
  const auto j = json::parse(read_file(dir / "ladder.json"));
  const std::size_t rungs = j.at("rungs").size();
  std::string regression;
  std::istringstream lines(digest.text);
  for (std::string line; std::getline(lines, line);)
    if (line.find("regression team_wdl ~ expert_solo_wdl") != std::string::npos) regression = line;
  while (!regression.empty() && regression.front() == ' ') regression.erase(regression.begin());
  const bool table = digest.text.find("expert") != std::string::npos && !j.at("regression").is_null();
  const bool ok = rungs >= 4 && ctx.config.openings.count >= 200 && table && regression.find("CI") != std::string::npos;
  return {ok, std::to_string(rungs) + " rungs x " + std::to_string(ctx.config.openings.count) + " openings; " +
                  (regression.empty() ? std::string("no regression line") : regression) +
                  " (full table in ladder_report.txt)"};
}

Outcome determinism_check() {
  std::vector<std::string> hashes[2];
  for (int run = 0; run < 2; ++run) {
    auto ctx = context_for("smoke.json", "smoke" + std::to_string(run));
    hashes[run].push_back(manifest_hash(experiment::cmd_run_match(ctx)));
    hashes[run].push_back(manifest_hash(experiment::cmd_train_manager(ctx)));
    hashes[run].push_back(manifest_hash(experiment::cmd_analyze(ctx)));
    hashes[run].push_back(manifest_hash(experiment::cmd_run_match(ctx, experiment::ManagerSpec::parse("rl"))));
  }
  std::string shown;
  for (const auto& h : hashes[0]) shown += h.substr(0, 12) + " ";
  return {hashes[0] == hashes[1], "match, train, analyze, rl match manifests: " + shown +
                                      (hashes[0] == hashes[1] ? "identical across two runs" : "DIFFER")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite"};
  std::string out = "acceptance_out";
  std::vector<std::string> only;
  app.add_option("--out", out, "scratch directory (cleared first)");
  app.add_option("--only", only, "run only the named checks");
  CLI11_PARSE(app, argc, argv);

  g_out = fs::absolute(out);
  fs::remove_all(g_out);
  fs::create_directories(g_out);

  const std::vector<Check> checks = {
      {"perft", 60, perft_check},
      {"gradient", 60, gradient_check},
      {"attention-rows", 0, attention_rows_check},
      {"team-equivalence", 0, team_equivalence_check},
      {"stats-oracles", 0, stats_oracle_check},
      {"side-to-move", 600, side_to_move_check},
      {"rigged-routing", 3600, rigged_check},
      {"attention-controls", 0, attention_controls_check},
      {"synergy-ladder", 3600, ladder_check},
      {"determinism", 0, determinism_check},
  };

  int failed = 0;
  for (const auto& c : checks) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.name) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.budget_s <= 0 || s < c.budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::cout << (pass ? "PASS " : "FAIL ") << c.name << ": " << o.detail << " [" << num(s, 3) << " s";
    if (c.budget_s > 0) std::cout << " of " << num(c.budget_s, 4) << " s";
    std::cout << "]" << std::endl;
  }
  std::cout << (failed == 0 ? "all acceptance checks passed" : std::to_string(failed) + " acceptance check(s) failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
