#include "teamchess/rl/policy.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "teamchess/chess/fen.hpp"
#include "teamchess/chess/movegen.hpp"
#include "teamchess/engines/pool.hpp"
#include "teamchess/rl/checkpoint.hpp"
#include "teamchess/rl/manager.hpp"
#include "teamchess/team/records.hpp"
#include "teamchess/util/io.hpp"
#include "teamchess/util/parallel.hpp"

namespace teamchess::rl {

using chess::BoardState;
using json = nlohmann::json;

RolloutEstimate estimate_q(const team::DisagreementRecord& d, const RolloutStack& stack, const RolloutConfig& cfg,
                           std::uint64_t seed) {
  if (cfg.n_rollouts < 1) throw ContractError("n_rollouts must be positive");
  if (d.a1 == d.a2) throw ContractError("a disagreement needs two different moves");
  const BoardState start = chess::parse_fen(d.fen);
  if (chess::legal_moves(start).empty()) throw ContractError("disagreement state is terminal");

  RolloutEstimate est;
  est.disagreement = d;
  est.n_rollouts = cfg.n_rollouts;
  std::unique_ptr<engines::Engine> m1, m2, adv;
  for (int k = 1; k <= 2; ++k) {
    double total = 0.0;
    int survived = 0;
    for (int r = 0; r < cfg.n_rollouts; ++r) {
      if (!m1) m1 = stack.member1();
      if (!m2) m2 = stack.member2();
      if (!adv) adv = stack.adversary();
      auto manager = stack.manager();
      team::GameSetup setup;
      setup.start = start;
      setup.start_ply = d.ply;
      setup.team_color = start.side_to_move;
      setup.seed = derive_seed(seed, {static_cast<std::uint64_t>(r)});
      setup.game_id = d.game_id + "/q" + std::to_string(k) + "." + std::to_string(r);
      setup.ply_cap = cfg.ply_cap;
      setup.adjudication = cfg.adjudication;
      setup.forced_first_move = k == 1 ? d.a1 : d.a2;
      team::GameRecord g;
      try {
        g = team::play_team_game(*m1, *m2, *manager, *adv, setup);
      } catch (const ProtocolError& e) {
        g.error = e.what();
      }
      if (g.aborted()) {
        // The failing engine may be unusable; start fresh ones.
        m1.reset();
        m2.reset();
        adv.reset();
        continue;
      }
      total += g.outcome->score();
      ++survived;
    }
    if (2 * survived < cfg.n_rollouts || survived == 0)
      throw RolloutError("only " + std::to_string(survived) + " of " + std::to_string(cfg.n_rollouts) +
                         " rollouts of branch " + std::to_string(k) + " finished at " + d.game_id + " ply " +
                         std::to_string(d.ply));
    (k == 1 ? est.q1 : est.q2) = total / survived;
    (k == 1 ? est.survived1 : est.survived2) = survived;
  }
  return est;
}

std::optional<TrainingExample> example_from_estimate(const RolloutEstimate& e) {
  if (e.q1 == e.q2) return std::nullopt;
  return TrainingExample{chess::parse_fen(e.disagreement.fen), e.q1 > e.q2 ? 0 : 1, std::abs(e.q1 - e.q2)};
}

int material_routing_label(const BoardState& s) { return chess::material_balance(s, s.side_to_move) > 0 ? 0 : 1; }

std::string to_json_line(const DatasetEntry& e) {
  const json j = {{"iteration", e.iteration},
                  {"disagreement", json::parse(team::to_json_line(e.estimate.disagreement))},
                  {"q1", e.estimate.q1},
                  {"q2", e.estimate.q2},
                  {"n_rollouts", e.estimate.n_rollouts},
                  {"survived1", e.estimate.survived1},
                  {"survived2", e.estimate.survived2},
                  {"label", e.example.label + 1},
                  {"weight", e.example.weight}};
  return j.dump();
}

DatasetEntry dataset_entry_from_json(const std::string& line) {
  try {
    const json j = json::parse(line);
    DatasetEntry e;
    e.iteration = j.at("iteration").get<int>();
    e.estimate.disagreement = team::disagreement_from_json_line(j.at("disagreement").dump());
    e.estimate.q1 = j.at("q1").get<double>();
    e.estimate.q2 = j.at("q2").get<double>();
    e.estimate.n_rollouts = j.at("n_rollouts").get<int>();
    e.estimate.survived1 = j.at("survived1").get<int>();
    e.estimate.survived2 = j.at("survived2").get<int>();
    e.example.state = chess::parse_fen(e.estimate.disagreement.fen);
    e.example.label = j.at("label").get<int>() - 1;
    e.example.weight = j.at("weight").get<double>();
    if (e.example.label != 0 && e.example.label != 1) throw ParseError("label must be 1 or 2");
    return e;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("dataset line: ") + ex.what());
  }
}

std::string training_report_csv(const std::vector<IterationReport>& reports) {
  std::ostringstream os;
  os << "iteration,dataset_size,train_loss,heldout_routing_accuracy,team_wdl,sem,"
        "routing_labels,heldout_examples,disagreements,estimated,failed_estimates,ties_dropped,games\n";
  os << std::setprecision(17);
  for (const auto& r : reports) {
    os << r.iteration << ',' << r.dataset_size << ',' << r.train_loss << ',';
    if (r.heldout_routing_accuracy) os << *r.heldout_routing_accuracy;
    os << ',' << r.team.wdl << ',' << r.team.sem << ',' << r.routing_labels << ',' << r.heldout_examples << ','
       << r.disagreements << ',' << r.estimated << ',' << r.failed_estimates << ',' << r.ties_dropped << ','
       << r.team.games() << '\n';
  }
  return os.str();
}

namespace {

json report_json(const IterationReport& r) {
  json j = {{"iteration", r.iteration},
            {"disagreements", r.disagreements},
            {"estimated", r.estimated},
            {"failed_estimates", r.failed_estimates},
            {"ties_dropped", r.ties_dropped},
            {"dataset_size", r.dataset_size},
            {"train_loss", r.train_loss},
            {"routing_labels", r.routing_labels},
            {"heldout_examples", r.heldout_examples},
            {"team_scores", r.team.per_game_scores}};
  j["heldout_routing_accuracy"] = r.heldout_routing_accuracy ? json(*r.heldout_routing_accuracy) : json(nullptr);
  return j;
}

IterationReport report_from_json(const json& j) {
  IterationReport r;
  r.iteration = j.at("iteration").get<int>();
  r.disagreements = j.at("disagreements").get<std::size_t>();
  r.estimated = j.at("estimated").get<std::size_t>();
  r.failed_estimates = j.at("failed_estimates").get<std::size_t>();
  r.ties_dropped = j.at("ties_dropped").get<std::size_t>();
  r.dataset_size = j.at("dataset_size").get<std::size_t>();
  r.train_loss = j.at("train_loss").get<double>();
  r.routing_labels = j.at("routing_labels").get<std::string>();
  r.heldout_examples = j.at("heldout_examples").get<std::size_t>();
  if (!j.at("heldout_routing_accuracy").is_null()) r.heldout_routing_accuracy = j["heldout_routing_accuracy"].get<double>();
  r.team = team::MatchStatistics::from_scores(j.at("team_scores").get<std::vector<double>>());
  return r;
}

std::filesystem::path checkpoint_path(const std::filesystem::path& dir, int iteration) {
  return dir / "checkpoints" / ("iter" + std::to_string(iteration) + ".ckpt");
}

/// Seeded subsample of `n` indices out of `total`, returned in ascending order.
std::vector<std::size_t> subsample(std::size_t total, std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(total);
  std::iota(idx.begin(), idx.end(), 0);
  if (n == 0 || n >= total) return idx;
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) std::swap(idx[i], idx[i + rng.uniform_index(total - i)]);
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<team::DisagreementRecord> disagreements_of(const team::MatchResult& m) {
  std::vector<team::DisagreementRecord> out;
  for (const auto& g : m.games)
    if (!g.aborted()) out.insert(out.end(), g.disagreements.begin(), g.disagreements.end());
  return out;
}

struct Estimates {
  std::vector<RolloutEstimate> ok;
  std::size_t failed = 0;
};

Estimates estimate_all(const std::vector<team::DisagreementRecord>& ds, const RolloutStack& stack,
                       const RolloutConfig& cfg, std::uint64_t seed, unsigned workers) {
  std::vector<std::optional<RolloutEstimate>> slots(ds.size());
  parallel_for(ds.size(), workers, [&](std::size_t i) {
    try {
      slots[i] = estimate_q(ds[i], stack, cfg, derive_seed(seed, {static_cast<std::uint64_t>(i)}));
    } catch (const ProtocolError&) {
      slots[i].reset();
    }
  });
  Estimates out;
  for (auto& s : slots) {
    if (s)
      out.ok.push_back(std::move(*s));
    else
      ++out.failed;
  }
  return out;
}

}  // namespace

PolicyIterationResult run_policy_iteration(const PolicyIterationConfig& cfg) {
  if (cfg.iterations < 1) throw ConfigError("iterations must be positive");
  if (cfg.train_openings.empty() || cfg.heldout_openings.empty())
    throw ConfigError("policy iteration needs training and held-out openings");
  cfg.arch.validate();
  cfg.optimizer.validate();
  auto log = [&](const std::string& msg) {
    if (cfg.log) cfg.log(msg);
  };

  PolicyIterationResult res;
  res.params = init_params(cfg.arch, derive_seed(cfg.seed, {0x1417}), cfg.init_gain);
  int first = 0;

  if (cfg.out_dir) {
    std::filesystem::create_directories(*cfg.out_dir / "checkpoints");
    const auto state_path = *cfg.out_dir / "state.json";
    if (std::filesystem::exists(state_path)) {
      json st;
      try {
        st = json::parse(read_file(state_path));
      } catch (const json::exception& e) {
        throw ParseError("run state " + state_path.string() + ": " + e.what());
      }
      if (st.value("fingerprint", std::string()) != cfg.fingerprint)
        throw ConfigError("output directory " + cfg.out_dir->string() + " holds a run with a different configuration");
      for (const auto& r : st.at("reports")) res.reports.push_back(report_from_json(r));
      if (!res.reports.empty()) {
        first = res.reports.back().iteration + 1;
        res.params = load_checkpoint(checkpoint_path(*cfg.out_dir, first - 1), cfg.arch);
        std::istringstream ds(read_file(*cfg.out_dir / "dataset.jsonl"));
        for (std::string line; std::getline(ds, line);)
          if (!line.empty()) res.dataset.push_back(dataset_entry_from_json(line));
        log("resuming after iteration " + std::to_string(first - 1));
      }
    }
  }

  for (int it = first; it < cfg.iterations; ++it) {
    const auto iter = static_cast<std::uint64_t>(it);
    IterationReport rep;
    rep.iteration = it;

    // (i) harvest with the current manager
    auto current = std::make_shared<const ModelParams>(res.params);
    const team::ManagerFactory manager =
        it == 0 ? team::ManagerFactory([] { return std::make_unique<team::RandomManager>(); })
                : make_rl_factory(current, "rl-iter" + std::to_string(it - 1));
    team::MatchOptions harvest_opts = cfg.match;
    harvest_opts.label = "pi" + std::to_string(it);
    const team::MatchResult harvest = team::run_match({cfg.member1, cfg.member2, manager}, cfg.adversary,
                                                      cfg.train_openings, derive_seed(cfg.seed, {iter, 1}), harvest_opts);
    const auto all = disagreements_of(harvest);
    rep.disagreements = all.size();
    if (all.empty())
      throw DegenerateTeamError("iteration " + std::to_string(it) + ": " + std::to_string(harvest.games.size()) +
                                " games produced no disagreements; the members always agree");
    std::vector<team::DisagreementRecord> chosen;
    for (std::size_t i : subsample(all.size(), cfg.max_disagreements, derive_seed(cfg.seed, {iter, 5})))
      chosen.push_back(all[i]);
    rep.estimated = chosen.size();
    log("iteration " + std::to_string(it) + ": harvest wdl " + std::to_string(harvest.stats.wdl) + ", " +
        std::to_string(all.size()) + " disagreements, estimating " + std::to_string(chosen.size()));

    // (ii)-(iv) rollouts and labels
    const RolloutStack stack{cfg.member1, cfg.member2, manager, cfg.adversary};
    Estimates est = estimate_all(chosen, stack, cfg.rollout, derive_seed(cfg.seed, {iter, 2}), cfg.match.workers);
    rep.failed_estimates = est.failed;
    team::enforce_failure_budget(est.failed, chosen.size(), cfg.match.failure_budget);
    for (auto& e : est.ok) {
      auto ex = example_from_estimate(e);
      if (!ex) {
        ++rep.ties_dropped;
        continue;
      }
      res.dataset.push_back({it, std::move(e), std::move(*ex)});
    }
    rep.dataset_size = res.dataset.size();
    if (res.dataset.empty())
      throw DegenerateTeamError("iteration " + std::to_string(it) + ": every rollout estimate was a tie");

    // (v) train on everything gathered so far
    std::vector<TrainingExample> train;
    train.reserve(res.dataset.size());
    for (const auto& d : res.dataset) train.push_back(d.example);
    TrainResult tr = train_epochs(std::move(res.params), train, {}, cfg.optimizer, derive_seed(cfg.seed, {iter, 3}),
                                  cfg.match.workers);
    res.params = std::move(tr.params);
    rep.train_loss = tr.curve.back().train_loss;

    // (vi) evaluate on held-out openings
    auto trained = std::make_shared<const ModelParams>(res.params);
    const team::ManagerFactory trained_manager = make_rl_factory(trained, "rl-iter" + std::to_string(it));
    team::MatchOptions eval_opts = cfg.match;
    eval_opts.label = "eval" + std::to_string(it);
    const team::MatchResult eval = team::run_match({cfg.member1, cfg.member2, trained_manager}, cfg.adversary,
                                                   cfg.heldout_openings, derive_seed(cfg.seed, {4}), eval_opts);
    rep.team = eval.stats;
    const auto held = disagreements_of(eval);
    const auto pick = subsample(held.size(), cfg.max_heldout_examples, derive_seed(cfg.seed, {iter, 6}));
    std::vector<TrainingExample> labeled;
    if (cfg.oracle) {
      rep.routing_labels = "oracle";
      for (std::size_t i : pick) {
        const BoardState s = chess::parse_fen(held[i].fen);
        labeled.push_back({s, cfg.oracle(s), 1.0});
      }
    } else {
      rep.routing_labels = "rollouts";
      std::vector<team::DisagreementRecord> sample;
      for (std::size_t i : pick) sample.push_back(held[i]);
      const RolloutStack eval_stack{cfg.member1, cfg.member2, trained_manager, cfg.adversary};
      for (const auto& e :
           estimate_all(sample, eval_stack, cfg.rollout, derive_seed(cfg.seed, {iter, 7}), cfg.match.workers).ok)
        if (auto ex = example_from_estimate(e)) labeled.push_back(*ex);
    }
    rep.heldout_examples = labeled.size();
    if (!labeled.empty()) rep.heldout_routing_accuracy = accuracy(res.params, labeled);
    log("iteration " + std::to_string(it) + ": dataset " + std::to_string(rep.dataset_size) + ", loss " +
        std::to_string(rep.train_loss) + ", routing accuracy " +
        (rep.heldout_routing_accuracy ? std::to_string(*rep.heldout_routing_accuracy) : std::string("n/a")) +
        ", held-out wdl " + std::to_string(rep.team.wdl));
    res.reports.push_back(rep);

    if (cfg.out_dir) {
      save_checkpoint(checkpoint_path(*cfg.out_dir, it), res.params, {cfg.arch, cfg.seed, it});
      std::string lines;
      for (const auto& d : res.dataset) lines += to_json_line(d) + "\n";
      write_file_atomic(*cfg.out_dir / "dataset.jsonl", lines);
      write_file_atomic(*cfg.out_dir / "training_report.csv", training_report_csv(res.reports));
      json st = {{"fingerprint", cfg.fingerprint}, {"reports", json::array()}};
      for (const auto& r : res.reports) st["reports"].push_back(report_json(r));
      write_file_atomic(*cfg.out_dir / "state.json", st.dump(2) + "\n");
    }
  }
  return res;
}

}  // namespace teamchess::rl
