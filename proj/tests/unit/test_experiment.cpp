#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "teamchess/experiment/commands.hpp"
#include "teamchess/experiment/config.hpp"
#include "teamchess/experiment/manifest.hpp"
#include "teamchess/experiment/selfcheck.hpp"
#include "teamchess/rl/checkpoint.hpp"
#include "teamchess/team/records.hpp"
#include "teamchess/util/errors.hpp"
#include "teamchess/util/io.hpp"

using namespace teamchess;
using namespace teamchess::experiment;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json smoke_doc() {
  json j = json::parse(read_file(fixtures::source_dir() / "configs" / "smoke.json"));
  j["openings"]["file"] = (fixtures::source_dir() / "data" / "openings.epd").string();
  j["output_dir"] = "unused";
  return j;
}

ExperimentConfig parse(const json& j) { return parse_config(j.dump(), fixtures::source_dir()); }

std::string config_error(const json& j) {
  try {
    parse(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

CommandContext smoke_context(const json& doc, const std::string& tag) {
  CommandContext ctx;
  ctx.config = parse(doc);
  ctx.config.output_dir = fixtures::scratch_dir(tag);
  return ctx;
}

std::string manifest_hash(const fs::path& dir) { return read_manifest(dir / kManifestName).content_hash(); }

}  // namespace

TEST(Config, ShippedConfigsLoad) {
  for (const char* name : {"smoke.json", "ladder.json", "rigged.json"}) {
    const auto c = load_config(fixtures::source_dir() / "configs" / name);
    EXPECT_FALSE(c.name.empty()) << name;
    EXPECT_TRUE(fs::exists(c.openings_file)) << name;
  }
  const auto ladder = load_config(fixtures::source_dir() / "configs" / "ladder.json");
  ASSERT_TRUE(ladder.ladder);
  EXPECT_GE(ladder.ladder->experts.size(), 4u);
  EXPECT_GE(ladder.openings.count, 200u);
}

TEST(Config, HashIsStableAndSeedSensitive) {
  const auto a = parse(smoke_doc());
  const auto b = parse(json::parse(smoke_doc().dump(4)));
  EXPECT_EQ(config_hash(a), config_hash(b));
  const auto c = with_seed(a, a.seed + 1);
  EXPECT_NE(config_hash(a), config_hash(c));
  EXPECT_EQ(c.seed, a.seed + 1);
  EXPECT_EQ(config_hash(c), config_hash(parse(json::parse(c.canonical))));
  EXPECT_EQ(run_directory(a).filename().string(), "smoke-" + config_hash(a).substr(0, 12));
}

TEST(Config, UnknownAndMissingKeysNameTheirPath) {
  json j = smoke_doc();
  j["rl"]["optimizer"]["momentum"] = 0.9;
  EXPECT_NE(config_error(j).find("unknown key rl.optimizer.momentum"), std::string::npos) << config_error(j);

  j = smoke_doc();
  j["engines"]["adversary"]["limits"].erase("nodes");
  EXPECT_NE(config_error(j).find("missing key engines.adversary.limits.nodes"), std::string::npos);

  j = smoke_doc();
  j.erase("ladder");
  EXPECT_NE(config_error(j).find("missing key ladder"), std::string::npos);

  j = smoke_doc();
  j["rl"]["iterations"] = "three";
  EXPECT_NE(config_error(j).find("rl.iterations: expected an integer"), std::string::npos);

  j = smoke_doc();
  j["openings"]["file"] = "no/such/file.epd";
  EXPECT_NE(config_error(j).find("openings.file"), std::string::npos);

  j = smoke_doc();
  j["engines"]["member1"]["ref"] = "builtin:alphabeta?depth=x";
  EXPECT_NE(config_error(j).find("engines.member1.ref"), std::string::npos);

  j = smoke_doc();
  j["sme"] = nullptr;
  EXPECT_NE(config_error(j).find("sme: required"), std::string::npos);

  EXPECT_NE(config_error(json::array()).find("expected an object"), std::string::npos);
  EXPECT_THROW(parse_config("{not json", "."), ConfigError);
}

TEST(Config, ManagerSpecs) {
  EXPECT_EQ(ManagerSpec::parse("constant:2").constant, team::MemberId::Two);
  EXPECT_EQ(ManagerSpec::parse("constant:2").label(), "constant-2");
  for (const char* s : {"sme", "rl", "random", "constant:1"}) EXPECT_EQ(ManagerSpec::parse(s).to_string(), s);
  EXPECT_THROW(ManagerSpec::parse("constant:3"), ConfigError);
  EXPECT_THROW(ManagerSpec::parse("oracle"), ConfigError);
}

TEST(Config, OpeningSliceBounds) {
  const auto file = fixtures::source_dir() / "data" / "openings.epd";
  EXPECT_EQ(load_opening_slice(file, {5, 10}).size(), 10u);
  EXPECT_THROW(load_opening_slice(file, {245, 10}), ConfigError);
}

TEST(Manifest, HashIgnoresTimestampsAndManifests) {
  const auto dir = fixtures::scratch_dir("manifest");
  write_file_atomic(dir / "b.txt", "two");
  fs::create_directories(dir / "sub");
  write_file_atomic(dir / "sub" / "a.txt", "one");
  RunManifest m{"run-match", "abc", tool_version(), collect_artifacts(dir), "2020-01-01T00:00:00Z", "x"};
  ASSERT_EQ(m.artifacts.size(), 2u);
  EXPECT_EQ(m.artifacts[0].path, "b.txt");
  EXPECT_EQ(m.artifacts[1].path, "sub/a.txt");
  write_manifest(dir, m);
  EXPECT_EQ(collect_artifacts(dir).size(), 2u);
  RunManifest later = read_manifest(dir / kManifestName);
  EXPECT_EQ(later.content_hash(), m.content_hash());
  later.started_at = utc_timestamp();
  EXPECT_EQ(later.content_hash(), m.content_hash());
  later.artifacts[0].sha256 = sha256_hex("changed");
  EXPECT_NE(later.content_hash(), m.content_hash());
}

TEST(Commands, SmokePipelineIsDeterministic) {
  std::vector<std::string> hashes[2];
  for (int run = 0; run < 2; ++run) {
    auto ctx = smoke_context(smoke_doc(), "pipeline" + std::to_string(run));
    ctx.workers = run + 1;
    hashes[run].push_back(manifest_hash(cmd_run_match(ctx)));
    hashes[run].push_back(manifest_hash(cmd_train_manager(ctx)));
    hashes[run].push_back(manifest_hash(cmd_analyze(ctx)));
    hashes[run].push_back(manifest_hash(cmd_run_match(ctx, ManagerSpec::parse("rl"))));
  }
  EXPECT_EQ(hashes[0], hashes[1]);
}

TEST(Commands, ConstantManagerReplaysTheMember) {
  auto ctx = smoke_context(smoke_doc(), "constant");
  for (const char* k : {"constant:1", "constant:2"}) {
    const auto out = cmd_run_match(ctx, ManagerSpec::parse(k));
    const auto team = team::games_from_jsonl(read_file(out / "games.jsonl"));
    const auto solo = team::games_from_jsonl(
        read_file(out / (std::string(k) == "constant:1" ? "games_member1_solo.jsonl" : "games_member2_solo.jsonl")));
    ASSERT_EQ(team.size(), solo.size());
    for (std::size_t i = 0; i < team.size(); ++i) {
      EXPECT_EQ(team[i].moves, solo[i].moves) << k << " game " << i;
      EXPECT_EQ(team[i].outcome, solo[i].outcome);
    }
  }
}

TEST(Commands, LadderWritesOneRowPerRung) {
  json j = smoke_doc();
  j["openings"]["count"] = 4;
  j["ladder"] = {{"experts", json::array()}, {"tie_epsilon", 0}};
  for (const char* ref : {"builtin:random", "builtin:greedy", "builtin:alphabeta?depth=1", "builtin:alphabeta?depth=2"})
    j["ladder"]["experts"].push_back(
        {{"ref", ref}, {"options", json::object()}, {"args", json::array()},
         {"limits", {{"depth", 1}, {"nodes", nullptr}, {"movetime_ms", nullptr}}}});
  auto ctx = smoke_context(j, "ladder");
  const auto out = cmd_run_match(ctx);
  EXPECT_EQ(out.filename(), "ladder");
  std::istringstream csv(read_file(out / "ladder.csv"));
  int lines = 0;
  for (std::string l; std::getline(csv, l);) ++lines;
  EXPECT_EQ(lines, 5);
  const json lj = json::parse(read_file(out / "ladder.json"));
  EXPECT_EQ(lj.at("rungs").size(), 4u);
  const auto digest = cmd_report(ctx.dir());
  EXPECT_NE(digest.text.find("regression team_wdl ~ expert_solo_wdl"), std::string::npos) << digest.text;
}

TEST(Commands, TrainingResumesToTheSameHash) {
  json doc = smoke_doc();
  doc["rl"]["iterations"] = 2;
  auto straight = smoke_context(doc, "train-straight");
  const std::string want = manifest_hash(cmd_train_manager(straight));
  EXPECT_TRUE(fs::exists(straight.dir() / "train" / "manager.ckpt"));
  EXPECT_NO_THROW(rl::load_checkpoint(straight.dir() / "train" / "manager.ckpt", straight.config.rl->arch));

  auto broken = smoke_context(doc, "train-resume");
  broken.log = [](const std::string& m) {
    if (m.rfind("iteration 1:", 0) == 0) throw std::runtime_error("interrupted");
  };
  EXPECT_THROW(cmd_train_manager(broken), std::runtime_error);
  EXPECT_TRUE(fs::exists(broken.dir() / "train" / "checkpoints" / "iter0.ckpt"));
  EXPECT_FALSE(fs::exists(broken.dir() / "train" / kManifestName));
  broken.log = {};
  EXPECT_EQ(manifest_hash(cmd_train_manager(broken)), want);
}

TEST(Commands, IdenticalMembersGiveADiagnostic) {
  json doc = smoke_doc();
  doc["engines"]["member2"] = doc["engines"]["member1"];
  auto ctx = smoke_context(doc, "degenerate");
  try {
    cmd_train_manager(ctx);
    FAIL() << "expected DegenerateTeamError";
  } catch (const DegenerateTeamError& e) {
    EXPECT_NE(std::string(e.what()).find("disagreement"), std::string::npos) << e.what();
  }
}

TEST(Commands, AnalyzeRejectsArchitectureMismatch) {
  auto ctx = smoke_context(smoke_doc(), "arch");
  rl::ArchSpec other;
  const auto ckpt = ctx.config.output_dir / "other.ckpt";
  rl::save_checkpoint(ckpt, rl::init_params(other, 1), {other, 1, 0});
  EXPECT_THROW(cmd_analyze(ctx, ckpt), ConfigError);
  EXPECT_THROW(cmd_analyze(ctx, ctx.config.output_dir / "missing.ckpt"), ConfigError);
}

TEST(Commands, AnalysisReportMatchesSchema) {
  auto ctx = smoke_context(smoke_doc(), "analysis");
  cmd_train_manager(ctx);
  const auto out = cmd_analyze(ctx);
  const std::string text = read_file(out / "report.json");
  EXPECT_TRUE(validate_analysis_report(text).empty());
  const json j = json::parse(text);
  EXPECT_EQ(j.at("studies").size(), 6u);
  for (const char* g : {"piece-vs-empty", "attacked-vs-not"})
    for (const char* c : {"none", "untrained", "shuffled"})
      EXPECT_TRUE(fs::exists(out / (std::string(g) + "_" + c + "_box.csv"))) << g << " " << c;
  json broken = j;
  broken["studies"][0].erase("a_w");
  broken["studies"][1]["a_w"] = 3;
  EXPECT_EQ(validate_analysis_report(broken.dump()).size(), 2u);
  const auto digest = cmd_report(ctx.dir());
  EXPECT_NE(digest.text.find("piece-vs-empty        untrained"), std::string::npos) << digest.text;
}

TEST(Report, EmptyAndPartialDirectories) {
  const auto empty = fixtures::scratch_dir("report-empty");
  const auto d = cmd_report(empty);
  EXPECT_TRUE(d.nothing);
  EXPECT_NE(d.text.find("nothing to report"), std::string::npos);

  auto ctx = smoke_context(smoke_doc(), "report-partial");
  const auto out = cmd_run_match(ctx);
  const auto digest = cmd_report(ctx.config.output_dir);
  EXPECT_FALSE(digest.nothing);
  EXPECT_NE(digest.text.find("synergy: "), std::string::npos);
  EXPECT_FALSE(digest.gaps.empty());
  EXPECT_NE(digest.text.find("no trained manager"), std::string::npos);

  fs::remove(out / "games.jsonl");
  const auto damaged = cmd_report(ctx.config.output_dir);
  EXPECT_NE(damaged.text.find("listed artifact missing"), std::string::npos);
}

TEST(Selfcheck, PassesAndCatchesInjectedFaults) {
  EXPECT_TRUE(run_selfcheck().passed());
  const auto movegen = run_selfcheck(Fault::Movegen);
  EXPECT_FALSE(movegen.passed());
  bool reported = false;
  for (const auto& l : movegen.lines)
    if (!l.pass && l.name == "perft kiwipete") reported = l.detail.find("depth 1") != std::string::npos;
  EXPECT_TRUE(reported);
  const auto grad = run_selfcheck(Fault::Gradient);
  for (const auto& l : grad.lines)
    if (l.name.rfind("gradient", 0) == 0) EXPECT_EQ(l.pass, l.name != "gradient head_w") << l.name;
  EXPECT_FALSE(run_selfcheck(Fault::Stats).passed());
  EXPECT_THROW(fault_from_string("disk"), ConfigError);
}

#ifdef TEAMCHESS_CLI_PATH
namespace {
int cli(const std::string& args) {
  const int rc = std::system((std::string(TEAMCHESS_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}
}  // namespace

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("perft --depth 2"), 0);
  EXPECT_EQ(cli(""), 1);
  EXPECT_EQ(cli("run-match"), 1);
  EXPECT_EQ(cli("selfcheck --inject-fault movegen"), 2);
  const auto dir = fixtures::scratch_dir("cli");
  json bad = smoke_doc();
  bad["extra"] = 1;
  write_file_atomic(dir / "bad.json", bad.dump());
  EXPECT_EQ(cli("run-match --config " + (dir / "bad.json").string()), 1);
  EXPECT_EQ(cli("report " + dir.string()), 0);
  json dead = smoke_doc();
  dead["engines"]["member1"]["ref"] = "/bin/false";
  dead["output_dir"] = (dir / "runs").string();
  write_file_atomic(dir / "dead.json", dead.dump());
  EXPECT_EQ(cli("run-match --manager constant:1 --config " + (dir / "dead.json").string()), 3);
}
#endif
