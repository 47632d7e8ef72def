#include "teamchess/experiment/config.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "teamchess/chess/notation.hpp"
#include "teamchess/engines/builtin.hpp"
#include "teamchess/util/errors.hpp"
#include "teamchess/util/io.hpp"

namespace teamchess::experiment {

using nlohmann::json;
namespace fs = std::filesystem;

ManagerSpec ManagerSpec::parse(const std::string& text) {
  ManagerSpec m;
  if (text == "sme") m.kind = Kind::Sme;
  else if (text == "rl") m.kind = Kind::Rl;
  else if (text == "random") m.kind = Kind::Random;
  else if (text == "constant:1" || text == "constant:2") {
    m.kind = Kind::Constant;
    m.constant = text.back() == '1' ? team::MemberId::One : team::MemberId::Two;
  } else {
    throw ConfigError("unknown manager '" + text + "' (expected sme, rl, constant:1, constant:2 or random)");
  }
  return m;
}

std::string ManagerSpec::to_string() const {
  switch (kind) {
    case Kind::Sme: return "sme";
    case Kind::Rl: return "rl";
    case Kind::Random: return "random";
    case Kind::Constant: return "constant:" + std::to_string(team::to_int(constant));
  }
  return "?";
}

std::string ManagerSpec::label() const {
  std::string s = to_string();
  std::replace(s.begin(), s.end(), ':', '-');
  return s;
}

namespace {

/// Walks one JSON object, checking that exactly the expected keys are present.
class Reader {
 public:
  Reader(const json& j, std::string path, std::set<std::string> keys) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
    for (const auto& k : keys)
      if (!j_.contains(k)) throw ConfigError("config: missing key " + at(k));
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!keys.contains(it.key())) throw ConfigError("config: unknown key " + at(it.key()));
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const json& raw(const std::string& key) const { return j_.at(key); }
  bool is_null(const std::string& key) const { return j_.at(key).is_null(); }

  std::string str(const std::string& key) const {
    const json& v = j_.at(key);
    if (!v.is_string()) fail(at(key), "expected a string");
    return v.get<std::string>();
  }

  std::int64_t integer(const std::string& key, std::int64_t lo, std::int64_t hi) const {
    const json& v = j_.at(key);
    if (!v.is_number_integer()) fail(at(key), "expected an integer");
    const auto x = v.get<std::int64_t>();
    if (x < lo || x > hi) fail(at(key), "out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return x;
  }

  std::uint64_t unsigned64(const std::string& key) const {
    const json& v = j_.at(key);
    if (!v.is_number_unsigned()) fail(at(key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  double number(const std::string& key) const {
    const json& v = j_.at(key);
    if (!v.is_number()) fail(at(key), "expected a number");
    return v.get<double>();
  }

  bool boolean(const std::string& key) const {
    const json& v = j_.at(key);
    if (!v.is_boolean()) fail(at(key), "expected true or false");
    return v.get<bool>();
  }

  std::optional<std::int64_t> opt_integer(const std::string& key, std::int64_t lo, std::int64_t hi) const {
    if (is_null(key)) return std::nullopt;
    return integer(key, lo, hi);
  }

  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw ConfigError("config: " + where + ": " + what);
  }

 private:
  const json& j_;
  std::string path_;
};

constexpr std::int64_t kBig = 1'000'000'000;

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path q(p);
  return q.is_absolute() ? q : base / q;
}

engines::EngineRef read_engine(const json& j, const std::string& path, const fs::path& base) {
  Reader r(j, path, {"ref", "options", "args", "limits"});
  engines::EngineRef e;
  e.ref = r.str("ref");
  if (engines::is_builtin_uri(e.ref)) {
    try {
      engines::parse_builtin_uri(e.ref);
    } catch (const std::exception& ex) {
      Reader::fail(r.at("ref"), ex.what());
    }
  } else if (e.ref.find('/') != std::string::npos) {
    const fs::path p = resolve(base, e.ref);
    if (!fs::exists(p)) Reader::fail(r.at("ref"), "engine executable " + p.string() + " does not exist");
    e.ref = p.string();
  } else {
    try {
      e.ref = engines::resolve_engine_path(e.ref).string();
    } catch (const std::exception& ex) {
      Reader::fail(r.at("ref"), ex.what());
    }
  }
  const json& opts = r.raw("options");
  if (!opts.is_object()) Reader::fail(r.at("options"), "expected an object");
  for (auto it = opts.begin(); it != opts.end(); ++it) {
    const json& v = it.value();
    if (v.is_string()) e.uci_options[it.key()] = v.get<std::string>();
    else if (v.is_boolean()) e.uci_options[it.key()] = v.get<bool>() ? "true" : "false";
    else if (v.is_number_integer()) e.uci_options[it.key()] = std::to_string(v.get<std::int64_t>());
    else Reader::fail(r.at("options") + "." + it.key(), "expected a string, integer or boolean");
  }
  const json& args = r.raw("args");
  if (!args.is_array()) Reader::fail(r.at("args"), "expected an array");
  for (const auto& a : args) {
    if (!a.is_string()) Reader::fail(r.at("args"), "expected strings");
    e.args.push_back(a.get<std::string>());
  }
  Reader lim(r.raw("limits"), r.at("limits"), {"depth", "nodes", "movetime_ms"});
  e.limits = {};
  if (auto d = lim.opt_integer("depth", 1, 64)) e.limits.depth = static_cast<int>(*d);
  if (auto n = lim.opt_integer("nodes", 1, kBig * 1000)) e.limits.nodes = *n;
  if (auto t = lim.opt_integer("movetime_ms", 1, 3'600'000)) e.limits.movetime_ms = static_cast<int>(*t);
  if (!e.limits.valid()) Reader::fail(r.at("limits"), "at least one of depth, nodes, movetime_ms must be set");
  return e;
}

std::optional<team::Adjudication> read_adjudication(const Reader& parent, const std::string& key) {
  if (parent.is_null(key)) return std::nullopt;
  Reader r(parent.raw(key), parent.at(key), {"max_plies", "material_margin"});
  return team::Adjudication{static_cast<int>(r.integer("max_plies", 1, 10000)),
                            static_cast<int>(r.integer("material_margin", 1, 100))};
}

OpeningSlice read_slice(const json& j, const std::string& path) {
  Reader r(j, path, {"offset", "count"});
  return {static_cast<std::size_t>(r.integer("offset", 0, kBig)), static_cast<std::size_t>(r.integer("count", 1, kBig))};
}

rl::OptimizerConfig read_optimizer(const json& j, const std::string& path) {
  Reader r(j, path,
           {"kind", "learning_rate", "cosine_decay", "min_lr_fraction", "clip_norm", "beta1", "beta2", "epsilon",
            "batch_size", "epochs"});
  rl::OptimizerConfig o;
  try {
    o.kind = rl::optimizer_kind_from_string(r.str("kind"));
  } catch (const ConfigError& e) {
    Reader::fail(r.at("kind"), e.what());
  }
  o.learning_rate = r.number("learning_rate");
  o.cosine_decay = r.boolean("cosine_decay");
  o.min_lr_fraction = r.number("min_lr_fraction");
  o.clip_norm = r.number("clip_norm");
  o.beta1 = r.number("beta1");
  o.beta2 = r.number("beta2");
  o.adam_epsilon = r.number("epsilon");
  o.batch_size = static_cast<int>(r.integer("batch_size", 1, 1 << 20));
  o.epochs = static_cast<int>(r.integer("epochs", 1, 100000));
  try {
    o.validate();
  } catch (const ConfigError& e) {
    Reader::fail(path, e.what());
  }
  return o;
}

RlBlock read_rl(const json& j, const std::string& path) {
  Reader r(j, path,
           {"arch", "init_gain", "iterations", "n_rollouts", "rollout_ply_cap", "rollout_adjudication",
            "max_disagreements", "max_heldout_examples", "heldout_openings", "optimizer", "routing_oracle"});
  RlBlock b;
  Reader a(r.raw("arch"), r.at("arch"), {"layers", "heads", "model_dim", "ff_dim"});
  b.arch.layers = static_cast<int>(a.integer("layers", 1, 64));
  b.arch.heads = static_cast<int>(a.integer("heads", 1, 64));
  b.arch.model_dim = static_cast<int>(a.integer("model_dim", 1, 4096));
  b.arch.ff_dim = static_cast<int>(a.integer("ff_dim", 1, 16384));
  try {
    b.arch.validate();
  } catch (const ConfigError& e) {
    Reader::fail(r.at("arch"), e.what());
  }
  b.init_gain = r.number("init_gain");
  if (!(b.init_gain > 0)) Reader::fail(r.at("init_gain"), "must be positive");
  b.iterations = static_cast<int>(r.integer("iterations", 1, 1000));
  b.n_rollouts = static_cast<int>(r.integer("n_rollouts", 1, 10000));
  b.rollout_ply_cap = static_cast<int>(r.integer("rollout_ply_cap", 1, 100000));
  b.rollout_adjudication = read_adjudication(r, "rollout_adjudication");
  b.max_disagreements = static_cast<std::size_t>(r.integer("max_disagreements", 0, kBig));
  b.max_heldout_examples = static_cast<std::size_t>(r.integer("max_heldout_examples", 1, kBig));
  b.heldout = read_slice(r.raw("heldout_openings"), r.at("heldout_openings"));
  b.optimizer = read_optimizer(r.raw("optimizer"), r.at("optimizer"));
  if (!r.is_null("routing_oracle")) {
    b.routing_oracle = r.str("routing_oracle");
    if (*b.routing_oracle != "material") Reader::fail(r.at("routing_oracle"), "only \"material\" is known");
  }
  return b;
}

AnalysisBlock read_analysis(const json& j, const std::string& path) {
  Reader r(j, path, {"positions", "groupings", "controls", "init_gain"});
  AnalysisBlock b;
  b.positions = static_cast<std::size_t>(r.integer("positions", 1, kBig));
  b.init_gain = r.number("init_gain");
  if (!(b.init_gain > 0)) Reader::fail(r.at("init_gain"), "must be positive");
  for (const char* key : {"groupings", "controls"}) {
    const json& arr = r.raw(key);
    if (!arr.is_array() || arr.empty()) Reader::fail(r.at(key), "expected a non-empty array");
    for (const auto& v : arr) {
      if (!v.is_string()) Reader::fail(r.at(key), "expected strings");
      try {
        if (std::string(key) == "groupings") b.groupings.push_back(analysis::grouping_from_string(v.get<std::string>()));
        else b.controls.push_back(analysis::control_from_string(v.get<std::string>()));
      } catch (const ConfigError& e) {
        Reader::fail(r.at(key), e.what());
      }
    }
  }
  return b;
}

ExperimentConfig from_json(const json& doc, const fs::path& base) {
  Reader r(doc, "",
           {"name", "seed", "output_dir", "openings", "engines", "manager", "sme", "match", "ladder", "rl", "analysis"});
  ExperimentConfig c;
  c.name = r.str("name");
  if (c.name.empty() || c.name.find_first_of("/\\ ") != std::string::npos)
    Reader::fail("name", "must be non-empty without spaces or slashes");
  c.seed = r.unsigned64("seed");
  c.output_dir = resolve(base, r.str("output_dir"));

  Reader o(r.raw("openings"), "openings", {"file", "offset", "count"});
  c.openings_file = resolve(base, o.str("file"));
  if (!fs::exists(c.openings_file)) Reader::fail("openings.file", c.openings_file.string() + " does not exist");
  c.openings = {static_cast<std::size_t>(o.integer("offset", 0, kBig)),
                static_cast<std::size_t>(o.integer("count", 1, kBig))};

  Reader e(r.raw("engines"), "engines", {"member1", "member2", "adversary"});
  c.member1 = read_engine(e.raw("member1"), "engines.member1", base);
  c.member2 = read_engine(e.raw("member2"), "engines.member2", base);
  c.adversary = read_engine(e.raw("adversary"), "engines.adversary", base);

  try {
    c.manager = ManagerSpec::parse(r.str("manager"));
  } catch (const ConfigError& ex) {
    Reader::fail("manager", ex.what());
  }

  if (!r.is_null("sme")) {
    Reader s(r.raw("sme"), "sme", {"expert", "tie_epsilon"});
    c.sme = SmeBlock{read_engine(s.raw("expert"), "sme.expert", base),
                     static_cast<int>(s.integer("tie_epsilon", 0, 100000))};
  }
  if (c.manager.kind == ManagerSpec::Kind::Sme && !c.sme) Reader::fail("sme", "required when manager is sme");

  Reader m(r.raw("match"), "match", {"ply_cap", "adjudication", "failure_budget"});
  c.match.ply_cap = static_cast<int>(m.integer("ply_cap", 1, 100000));
  c.match.adjudication = read_adjudication(m, "adjudication");
  c.match.failure_budget = m.number("failure_budget");
  if (c.match.failure_budget < 0 || c.match.failure_budget > 1) Reader::fail("match.failure_budget", "must lie in [0, 1]");

  if (!r.is_null("ladder")) {
    Reader l(r.raw("ladder"), "ladder", {"experts", "tie_epsilon"});
    const json& ex = l.raw("experts");
    if (!ex.is_array() || ex.empty()) Reader::fail("ladder.experts", "expected a non-empty array");
    LadderBlock lb;
    for (std::size_t i = 0; i < ex.size(); ++i)
      lb.experts.push_back(read_engine(ex[i], "ladder.experts[" + std::to_string(i) + "]", base));
    lb.tie_epsilon = static_cast<int>(l.integer("tie_epsilon", 0, 100000));
    c.ladder = std::move(lb);
  }
  if (!r.is_null("rl")) c.rl = read_rl(r.raw("rl"), "rl");
  if (!r.is_null("analysis")) c.analysis = read_analysis(r.raw("analysis"), "analysis");
  c.canonical = doc.dump();
  return c;
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: not valid JSON: ") + e.what());
  }
  return from_json(doc, base_dir);
}

ExperimentConfig load_config(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError("config file " + path.string() + " does not exist");
  return parse_config(read_file(path), fs::absolute(path).parent_path());
}

ExperimentConfig with_seed(ExperimentConfig cfg, std::uint64_t seed) {
  json doc = json::parse(cfg.canonical);
  doc["seed"] = seed;
  cfg.seed = seed;
  cfg.canonical = doc.dump();
  return cfg;
}

std::string config_hash(const ExperimentConfig& cfg) { return sha256_hex(cfg.canonical); }

fs::path run_directory(const ExperimentConfig& cfg) {
  return cfg.output_dir / (cfg.name + "-" + config_hash(cfg).substr(0, 12));
}

std::vector<chess::BoardState> load_opening_slice(const fs::path& file, const OpeningSlice& slice) {
  const auto all = chess::load_openings(file);
  if (slice.offset + slice.count > all.size())
    throw ConfigError("opening slice [" + std::to_string(slice.offset) + ", " +
                      std::to_string(slice.offset + slice.count) + ") exceeds the " + std::to_string(all.size()) +
                      " positions in " + file.string());
  return {all.begin() + static_cast<std::ptrdiff_t>(slice.offset),
          all.begin() + static_cast<std::ptrdiff_t>(slice.offset + slice.count)};
}

}  // namespace teamchess::experiment
