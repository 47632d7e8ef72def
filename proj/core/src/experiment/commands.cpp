#include "teamchess/experiment/commands.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <json.hpp>

#include "teamchess/analysis/attention.hpp"
#include "teamchess/analysis/stats.hpp"
#include "teamchess/experiment/manifest.hpp"
#include "teamchess/rl/checkpoint.hpp"
#include "teamchess/rl/manager.hpp"
#include "teamchess/sme/sme.hpp"
#include "teamchess/team/records.hpp"
#include "teamchess/util/errors.hpp"
#include "teamchess/util/io.hpp"

namespace teamchess::experiment {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void say(const CommandContext& ctx, const std::string& msg) {
  if (ctx.log) ctx.log(msg);
}

team::MatchOptions match_options(const CommandContext& ctx, const std::string& label) {
  team::MatchOptions o;
  o.workers = ctx.workers;
  o.ply_cap = ctx.config.match.ply_cap;
  o.adjudication = ctx.config.match.adjudication;
  o.failure_budget = ctx.config.match.failure_budget;
  o.label = label;
  return o;
}

fs::path fresh_dir(const fs::path& p) {
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_config_copy(const CommandContext& ctx) {
  fs::create_directories(ctx.dir());
  write_file_atomic(ctx.dir() / "config.json", json::parse(ctx.config.canonical).dump(2) + "\n");
}

void finish(const CommandContext& ctx, const fs::path& dir, const std::string& command, const std::string& started) {
  RunManifest m;
  m.command = command;
  m.config_hash = config_hash(ctx.config);
  m.tool_version = tool_version();
  m.artifacts = collect_artifacts(dir);
  m.started_at = started;
  m.finished_at = utc_timestamp();
  write_manifest(dir, m);
  say(ctx, command + ": wrote " + dir.string() + " (content hash " + m.content_hash().substr(0, 12) + ")");
}

json stats_json(const std::string& name, const team::MatchResult& r) {
  const auto& s = r.stats;
  return {{"name", name},     {"games", s.games()}, {"wins", s.wins}, {"draws", s.draws},
          {"losses", s.losses}, {"wdl", s.wdl},     {"sem", s.sem},   {"aborted", r.aborted},
          {"scores", s.per_game_scores}};
}

team::MatchStatistics stats_from_json(const json& j) {
  return team::MatchStatistics::from_scores(j.at("scores").get<std::vector<double>>());
}

fs::path default_checkpoint(const CommandContext& ctx) { return ctx.dir() / "train" / "manager.ckpt"; }

std::shared_ptr<const rl::ModelParams> load_manager_params(const CommandContext& ctx,
                                                           const std::optional<fs::path>& checkpoint) {
  const fs::path path = checkpoint ? *checkpoint : default_checkpoint(ctx);
  if (!fs::exists(path))
    throw ConfigError("checkpoint " + path.string() + " does not exist (run train-manager or pass --checkpoint)");
  std::optional<rl::ArchSpec> expected;
  if (ctx.config.rl) expected = ctx.config.rl->arch;
  return std::make_shared<const rl::ModelParams>(rl::load_checkpoint(path, expected));
}

team::ManagerFactory manager_factory(const CommandContext& ctx, const ManagerSpec& spec,
                                     const std::optional<fs::path>& checkpoint) {
  switch (spec.kind) {
    case ManagerSpec::Kind::Sme:
      if (!ctx.config.sme) throw ConfigError("the sme manager needs an sme block in the config");
      return sme::make_sme_factory({ctx.config.sme->expert, ctx.config.sme->tie_epsilon});
    case ManagerSpec::Kind::Rl:
      return rl::make_rl_factory(load_manager_params(ctx, checkpoint), "rl");
    case ManagerSpec::Kind::Constant: {
      const team::MemberId k = spec.constant;
      return [k] { return std::make_unique<team::ConstantManager>(k); };
    }
    case ManagerSpec::Kind::Random:
      return [] { return std::make_unique<team::RandomManager>(); };
  }
  throw ContractError("unhandled manager kind");
}

fs::path run_ladder(const CommandContext& ctx, const std::string& started) {
  const auto& cfg = ctx.config;
  const fs::path out = fresh_dir(ctx.dir() / "ladder");
  const auto openings = load_opening_slice(cfg.openings_file, cfg.openings);
  const auto m1 = engines::make_engine_factory(cfg.member1);
  const auto m2 = engines::make_engine_factory(cfg.member2);
  const auto adv = engines::make_engine_factory(cfg.adversary);

  say(ctx, "ladder: member solo baselines on " + std::to_string(openings.size()) + " openings");
  const auto solo1 = team::solo_baseline(m1, adv, openings, cfg.seed, match_options(ctx, "solo1"));
  const auto solo2 = team::solo_baseline(m2, adv, openings, cfg.seed, match_options(ctx, "solo2"));

  std::vector<sme::SmeConfig> rungs;
  for (const auto& e : cfg.ladder->experts) rungs.push_back({e, cfg.ladder->tie_epsilon});
  say(ctx, "ladder: " + std::to_string(rungs.size()) + " rungs");
  const auto rows = sme::run_expertise_ladder(rungs, m1, m2, adv, openings, cfg.seed, match_options(ctx, "ladder"));

  write_file_atomic(out / "ladder.csv", sme::ladder_csv(rows));
  write_file_atomic(out / "games_member1_solo.jsonl", team::games_to_jsonl(solo1.games));
  write_file_atomic(out / "games_member2_solo.jsonl", team::games_to_jsonl(solo2.games));

  json j;
  j["member1_solo"] = stats_json(solo1.team_name, solo1);
  j["member2_solo"] = stats_json(solo2.team_name, solo2);
  j["rungs"] = json::array();
  std::vector<double> x, y;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    write_file_atomic(out / ("games_rung" + std::to_string(i) + "_solo.jsonl"), team::games_to_jsonl(r.solo.games));
    write_file_atomic(out / ("games_rung" + std::to_string(i) + "_team.jsonl"), team::games_to_jsonl(r.team.games));
    j["rungs"].push_back({{"expert", r.expert_name},
                          {"solo", stats_json(r.expert_name, r.solo)},
                          {"team", stats_json(r.team.team_name, r.team)}});
    x.push_back(r.solo.stats.wdl);
    y.push_back(r.team.stats.wdl);
  }
  j["regression"] = nullptr;
  if (rows.size() >= 3) {
    try {
      const auto reg = analysis::trend_regression(x, y);
      j["regression"] = {{"x", "expert_solo_wdl"}, {"y", "team_wdl"}, {"slope", reg.slope},
                         {"intercept", reg.intercept}, {"slope_se", reg.slope_se}, {"t", reg.t},
                         {"p", reg.p},               {"ci_low", reg.ci_low},     {"ci_high", reg.ci_high},
                         {"df", reg.df},             {"r_squared", reg.r_squared}};
    } catch (const NumericError& e) {
      j["regression_error"] = e.what();
    }
  }
  write_file_atomic(out / "ladder.json", j.dump(2) + "\n");
  finish(ctx, out, "run-match", started);
  return out;
}

}  // namespace

fs::path cmd_run_match(const CommandContext& ctx, const std::optional<ManagerSpec>& manager,
                       const std::optional<fs::path>& checkpoint) {
  const std::string started = utc_timestamp();
  const auto& cfg = ctx.config;
  const ManagerSpec spec = manager.value_or(cfg.manager);
  write_config_copy(ctx);
  if (cfg.ladder && spec.kind == ManagerSpec::Kind::Sme) return run_ladder(ctx, started);

  const auto factory = manager_factory(ctx, spec, checkpoint);
  const fs::path out = fresh_dir(ctx.dir() / "match" / spec.label());
  const auto openings = load_opening_slice(cfg.openings_file, cfg.openings);
  const auto m1 = engines::make_engine_factory(cfg.member1);
  const auto m2 = engines::make_engine_factory(cfg.member2);
  const auto adv = engines::make_engine_factory(cfg.adversary);

  say(ctx, "run-match: " + spec.to_string() + " team on " + std::to_string(openings.size()) + " openings");
  const auto teamr = team::run_match({m1, m2, factory}, adv, openings, cfg.seed, match_options(ctx, spec.label()));
  const auto solo1 = team::solo_baseline(m1, adv, openings, cfg.seed, match_options(ctx, "solo1"));
  const auto solo2 = team::solo_baseline(m2, adv, openings, cfg.seed, match_options(ctx, "solo2"));

  write_file_atomic(out / "games.jsonl", team::games_to_jsonl(teamr.games));
  write_file_atomic(out / "games_member1_solo.jsonl", team::games_to_jsonl(solo1.games));
  write_file_atomic(out / "games_member2_solo.jsonl", team::games_to_jsonl(solo2.games));
  std::string csv = "role," + team::match_csv_header() + "\n";
  csv += "team," + team::match_csv_row(teamr) + "\n";
  csv += "member1_solo," + team::match_csv_row(solo1) + "\n";
  csv += "member2_solo," + team::match_csv_row(solo2) + "\n";
  write_file_atomic(out / "summary.csv", csv);
  json j;
  j["manager"] = spec.to_string();
  j["team"] = stats_json(teamr.team_name, teamr);
  j["member1_solo"] = stats_json(solo1.team_name, solo1);
  j["member2_solo"] = stats_json(solo2.team_name, solo2);
  write_file_atomic(out / "summary.json", j.dump(2) + "\n");
  finish(ctx, out, "run-match", started);
  return out;
}

fs::path cmd_train_manager(const CommandContext& ctx) {
  const std::string started = utc_timestamp();
  const auto& cfg = ctx.config;
  if (!cfg.rl) throw ConfigError("train-manager needs an rl block in the config");
  const RlBlock& b = *cfg.rl;
  write_config_copy(ctx);
  const fs::path out = ctx.dir() / "train";
  fs::create_directories(out);

  rl::PolicyIterationConfig pc;
  pc.member1 = engines::make_engine_factory(cfg.member1);
  pc.member2 = engines::make_engine_factory(cfg.member2);
  pc.adversary = engines::make_engine_factory(cfg.adversary);
  pc.train_openings = load_opening_slice(cfg.openings_file, cfg.openings);
  pc.heldout_openings = load_opening_slice(cfg.openings_file, b.heldout);
  pc.arch = b.arch;
  pc.init_gain = b.init_gain;
  pc.optimizer = b.optimizer;
  pc.iterations = b.iterations;
  pc.rollout.n_rollouts = b.n_rollouts;
  pc.rollout.ply_cap = b.rollout_ply_cap;
  pc.rollout.adjudication = b.rollout_adjudication;
  pc.max_disagreements = b.max_disagreements;
  pc.max_heldout_examples = b.max_heldout_examples;
  pc.match = match_options(ctx, "train");
  pc.seed = cfg.seed;
  if (b.routing_oracle) pc.oracle = rl::material_routing_label;
  pc.out_dir = out;
  pc.fingerprint = config_hash(cfg);
  pc.log = ctx.log;

  const auto res = rl::run_policy_iteration(pc);
  rl::save_checkpoint(out / "manager.ckpt", res.params, {b.arch, cfg.seed, b.iterations - 1});
  finish(ctx, out, "train-manager", started);
  return out;
}

fs::path cmd_analyze(const CommandContext& ctx, const std::optional<fs::path>& checkpoint) {
  const std::string started = utc_timestamp();
  const auto& cfg = ctx.config;
  if (!cfg.analysis) throw ConfigError("analyze needs an analysis block in the config");
  const AnalysisBlock& b = *cfg.analysis;
  const auto params = load_manager_params(ctx, checkpoint);
  write_config_copy(ctx);
  const fs::path out = fresh_dir(ctx.dir() / "analysis");

  const auto openings = load_opening_slice(cfg.openings_file, cfg.openings);
  say(ctx, "analyze: playing the rl team for position sampling");
  const auto games = team::run_match({engines::make_engine_factory(cfg.member1),
                                      engines::make_engine_factory(cfg.member2), rl::make_rl_factory(params, "rl")},
                                     engines::make_engine_factory(cfg.adversary), openings,
                                     derive_seed(cfg.seed, {0xA11}), match_options(ctx, "analysis"));
  const auto positions = analysis::sample_positions_from_games(games.games, b.positions, derive_seed(cfg.seed, {0xA12}));
  write_file_atomic(out / "games.jsonl", team::games_to_jsonl(games.games));

  json report;
  report["checkpoint_digest"] = rl::params_digest(*params);
  report["positions"] = positions.size();
  report["studies"] = json::array();
  for (const auto g : b.groupings) {
    for (const auto c : b.controls) {
      say(ctx, "analyze: " + analysis::to_string(g) + " / " + analysis::to_string(c));
      const auto st = analysis::attention_group_study(*params, positions, g, c, derive_seed(cfg.seed, {0xA13}),
                                                      ctx.workers, b.init_gain);
      const std::string stem = analysis::to_string(g) + "_" + analysis::to_string(c);
      write_file_atomic(out / (stem + "_paired.csv"), analysis::paired_samples_csv(st));
      write_file_atomic(out / (stem + "_box.csv"), analysis::box_stats_csv(st));
      auto box = [](const analysis::BoxStats& s) {
        return json{{"n", s.n},           {"min", s.min},   {"q1", s.q1},
                    {"median", s.median}, {"q3", s.q3},     {"max", s.max},
                    {"mean", s.mean},     {"whisker_low", s.whisker_low}, {"whisker_high", s.whisker_high},
                    {"outliers", s.outliers}};
      };
      report["studies"].push_back({{"grouping", analysis::to_string(g)},
                                   {"control", analysis::to_string(c)},
                                   {"samples", st.samples.size()},
                                   {"skipped", st.skipped},
                                   {"a_w", st.a_w},
                                   {"a_w_weighted", st.a_w_weighted},
                                   {"paired_a_greater", st.paired_a_greater},
                                   {"box_a", box(st.box_a)},
                                   {"box_b", box(st.box_b)}});
    }
  }
  write_file_atomic(out / "report.json", report.dump(2) + "\n");
  finish(ctx, out, "analyze", started);
  return out;
}

std::vector<std::string> validate_analysis_report(const std::string& json_text) {
  std::vector<std::string> problems;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    return {std::string("not JSON: ") + e.what()};
  }
  auto need = [&](const json& o, const std::string& where, const std::string& key, auto pred, const char* what) {
    if (!o.is_object() || !o.contains(key)) problems.push_back(where + key + ": missing");
    else if (!pred(o.at(key))) problems.push_back(where + key + ": expected " + what);
  };
  auto is_str = [](const json& v) { return v.is_string(); };
  auto is_count = [](const json& v) { return v.is_number_unsigned(); };
  auto is_unit = [](const json& v) { return v.is_number() && v.get<double>() >= 0 && v.get<double>() <= 1; };
  auto is_num = [](const json& v) { return v.is_number(); };
  need(j, "", "checkpoint_digest", is_str, "a string");
  need(j, "", "positions", is_count, "a count");
  if (!j.contains("studies") || !j.at("studies").is_array()) {
    problems.push_back("studies: expected an array");
    return problems;
  }
  std::size_t i = 0;
  for (const auto& s : j.at("studies")) {
    const std::string w = "studies[" + std::to_string(i++) + "].";
    need(s, w, "grouping", is_str, "a string");
    need(s, w, "control", is_str, "a string");
    need(s, w, "samples", is_count, "a count");
    need(s, w, "skipped", is_count, "a count");
    need(s, w, "a_w", is_unit, "a number in [0, 1]");
    need(s, w, "a_w_weighted", is_unit, "a number in [0, 1]");
    need(s, w, "paired_a_greater", is_unit, "a number in [0, 1]");
    for (const char* bx : {"box_a", "box_b"}) {
      if (!s.contains(bx) || !s.at(bx).is_object()) {
        problems.push_back(w + bx + ": expected an object");
        continue;
      }
      for (const char* k : {"min", "q1", "median", "q3", "max", "mean", "whisker_low", "whisker_high"})
        need(s.at(bx), w + bx + ".", k, is_num, "a number");
      need(s.at(bx), w + bx + ".", "n", is_count, "a count");
      need(s.at(bx), w + bx + ".", "outliers", is_count, "a count");
    }
  }
  return problems;
}

namespace {

std::string fmt(double x, int prec = 3) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(prec);
  os << x;
  return os.str();
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

std::optional<json> read_json(const fs::path& p, std::vector<std::string>& gaps) {
  if (!fs::exists(p)) {
    gaps.push_back("missing " + p.string());
    return std::nullopt;
  }
  try {
    return json::parse(read_file(p));
  } catch (const json::exception& e) {
    gaps.push_back("unreadable " + p.string() + ": " + e.what());
    return std::nullopt;
  }
}

void report_match(std::ostringstream& os, const fs::path& dir, std::vector<std::string>& gaps) {
  const auto j = read_json(dir / "summary.json", gaps);
  if (!j) return;
  try {
    const auto teamst = stats_from_json(j->at("team"));
    const auto s1 = stats_from_json(j->at("member1_solo"));
    const auto s2 = stats_from_json(j->at("member2_solo"));
    const auto& best = s1.wdl >= s2.wdl ? s1 : s2;
    const std::string best_name = (s1.wdl >= s2.wdl ? j->at("member1_solo") : j->at("member2_solo")).at("name");
    const auto z = analysis::wdl_z_test(teamst, best);
    os << "  manager " << j->at("manager").get<std::string>() << "\n";
    os << "    member1 solo " << pad(j->at("member1_solo").at("name"), 40) << " WDL " << fmt(s1.wdl) << " +/- "
       << fmt(s1.sem) << "\n";
    os << "    member2 solo " << pad(j->at("member2_solo").at("name"), 40) << " WDL " << fmt(s2.wdl) << " +/- "
       << fmt(s2.sem) << "\n";
    os << "    team         " << pad(j->at("team").at("name"), 40) << " WDL " << fmt(teamst.wdl) << " +/- "
       << fmt(teamst.sem) << "  (" << teamst.games() << " games)\n";
    os << "    synergy: " << (teamst.wdl > best.wdl ? "yes" : "no") << " (team " << fmt(teamst.wdl) << " vs best member "
       << best_name << " " << fmt(best.wdl) << "; z = " << (z.infinite ? std::string(z.z > 0 ? "+inf" : "-inf") : fmt(z.z, 2))
       << ", p = " << fmt(z.p, 4) << ")\n";
  } catch (const json::exception& e) {
    gaps.push_back("malformed " + (dir / "summary.json").string() + ": " + e.what());
  }
}

void report_ladder(std::ostringstream& os, const fs::path& dir, std::vector<std::string>& gaps) {
  const auto j = read_json(dir / "ladder.json", gaps);
  if (!j) return;
  try {
    const auto s1 = stats_from_json(j->at("member1_solo"));
    const auto s2 = stats_from_json(j->at("member2_solo"));
    const double best = std::max(s1.wdl, s2.wdl);
    os << "  member1 solo WDL " << fmt(s1.wdl) << ", member2 solo WDL " << fmt(s2.wdl) << "\n";
    os << "  " << pad("expert", 44) << pad("solo WDL", 16) << pad("team WDL", 16) << "synergy\n";
    for (const auto& r : j->at("rungs")) {
      const auto solo = stats_from_json(r.at("solo"));
      const auto t = stats_from_json(r.at("team"));
      os << "  " << pad(r.at("expert").get<std::string>(), 44) << pad(fmt(solo.wdl) + " +/- " + fmt(solo.sem), 16)
         << pad(fmt(t.wdl) + " +/- " + fmt(t.sem), 16) << (t.wdl > best ? "yes" : "no") << "\n";
    }
    if (j->at("regression").is_null()) {
      os << "  regression: not available (fewer than 3 rungs or degenerate x)\n";
    } else {
      const auto& g = j->at("regression");
      os << "  regression team_wdl ~ expert_solo_wdl: slope " << fmt(g.at("slope"), 4) << ", 95% CI ["
         << fmt(g.at("ci_low"), 4) << ", " << fmt(g.at("ci_high"), 4) << "], p = " << fmt(g.at("p"), 4)
         << ", df = " << g.at("df").get<int>() << "\n";
    }
  } catch (const json::exception& e) {
    gaps.push_back("malformed " + (dir / "ladder.json").string() + ": " + e.what());
  }
}

void report_train(std::ostringstream& os, const fs::path& dir, std::vector<std::string>& gaps) {
  const fs::path csv = dir / "training_report.csv";
  if (!fs::exists(csv)) {
    gaps.push_back("missing " + csv.string());
    return;
  }
  std::istringstream in(read_file(csv));
  std::string line;
  std::getline(in, line);
  os << "  iteration  dataset  train_loss  heldout_routing_acc  team_wdl\n";
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() < 6) continue;
    auto num = [&](const std::string& s) { return s.empty() ? std::string("-") : fmt(std::stod(s)); };
    os << "  " << pad(f[0], 11) << pad(f[1], 9) << pad(num(f[2]), 12) << pad(num(f[3]), 21) << num(f[4]) << " +/- "
       << num(f[5]) << "\n";
  }
  if (!fs::exists(dir / "manager.ckpt")) gaps.push_back("missing " + (dir / "manager.ckpt").string());
}

void report_analysis(std::ostringstream& os, const fs::path& dir, std::vector<std::string>& gaps) {
  const auto j = read_json(dir / "report.json", gaps);
  if (!j) return;
  try {
    os << "  " << j->at("positions").get<std::size_t>() << " positions\n";
    os << "  " << pad("grouping", 22) << pad("control", 12) << pad("A_w", 8) << pad("A_w weighted", 14) << "samples\n";
    for (const auto& s : j->at("studies"))
      os << "  " << pad(s.at("grouping"), 22) << pad(s.at("control"), 12) << pad(fmt(s.at("a_w")), 8)
         << pad(fmt(s.at("a_w_weighted")), 14) << s.at("samples").get<std::size_t>() << "\n";
  } catch (const json::exception& e) {
    gaps.push_back("malformed " + (dir / "report.json").string() + ": " + e.what());
  }
}

}  // namespace

ReportDigest cmd_report(const fs::path& dir) {
  ReportDigest d;
  std::vector<fs::path> manifests;
  if (fs::exists(dir))
    for (const auto& e : fs::recursive_directory_iterator(dir))
      if (e.is_regular_file() && e.path().filename() == kManifestName) manifests.push_back(e.path());
  std::sort(manifests.begin(), manifests.end());
  if (manifests.empty()) {
    d.nothing = true;
    d.text = "nothing to report: no " + std::string(kManifestName) + " under " + dir.string() + "\n";
    return d;
  }

  // Group command directories by run directory.
  std::map<fs::path, std::vector<fs::path>> runs;
  for (const auto& m : manifests) {
    const fs::path cmd_dir = m.parent_path();
    const fs::path run = cmd_dir.parent_path().filename() == "match" ? cmd_dir.parent_path().parent_path()
                                                                      : cmd_dir.parent_path();
    runs[run].push_back(cmd_dir);
  }

  std::ostringstream os;
  for (const auto& [run, dirs] : runs) {
    os << "run " << run.string() << "\n";
    bool has_train = false, has_ladder = false, has_match = false, has_analysis = false;
    for (const auto& cd : dirs) {
      RunManifest m;
      try {
        m = read_manifest(cd / kManifestName);
      } catch (const ParseError& e) {
        d.gaps.push_back(e.what());
        continue;
      }
      for (const auto& a : m.artifacts) {
        const fs::path p = cd / a.path;
        if (!fs::exists(p)) d.gaps.push_back("listed artifact missing: " + p.string());
        else if (sha256_file(p) != a.sha256) d.gaps.push_back("artifact changed since its manifest: " + p.string());
      }
      const std::string kind = cd.filename().string();
      os << "[" << m.command << "] " << fs::relative(cd, run).generic_string() << "  config "
         << m.config_hash.substr(0, 12) << "  content " << m.content_hash().substr(0, 12) << "\n";
      if (cd.parent_path().filename() == "match") {
        has_match = true;
        report_match(os, cd, d.gaps);
      } else if (kind == "ladder") {
        has_ladder = true;
        report_ladder(os, cd, d.gaps);
      } else if (kind == "train") {
        has_train = true;
        report_train(os, cd, d.gaps);
      } else if (kind == "analysis") {
        has_analysis = true;
        report_analysis(os, cd, d.gaps);
      }
    }
    if (!has_match) d.gaps.push_back(run.string() + ": no match results (run-match)");
    if (!has_ladder) d.gaps.push_back(run.string() + ": no expertise ladder (run-match with a ladder config)");
    if (!has_train) d.gaps.push_back(run.string() + ": no trained manager (train-manager)");
    if (!has_analysis) d.gaps.push_back(run.string() + ": no attention analysis (analyze)");
    os << "\n";
  }
  if (!d.gaps.empty()) {
    os << "gaps:\n";
    for (const auto& g : d.gaps) os << "  - " << g << "\n";
  }
  d.text = os.str();
  return d;
}

}  // namespace teamchess::experiment
