#include <chrono>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "teamchess/chess/fen.hpp"
#include "teamchess/chess/movegen.hpp"
#include "teamchess/experiment/commands.hpp"
#include "teamchess/experiment/selfcheck.hpp"
#include "teamchess/util/errors.hpp"
#include "teamchess/util/io.hpp"

namespace ex = teamchess::experiment;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kUsage = 1, kCheckFailed = 2, kEngineFailure = 3 };

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "override the master seed");
  cmd->add_option("--workers", c.workers, "worker threads")->check(CLI::Range(1u, 1024u));
  cmd->add_option("--out", c.out, "base output directory (overrides output_dir)");
}

ex::CommandContext context(const Common& c) {
  ex::CommandContext ctx;
  ctx.config = ex::load_config(c.config);
  if (c.seed) ctx.config = ex::with_seed(ctx.config, *c.seed);
  if (!c.out.empty()) ctx.config.output_dir = fs::absolute(c.out);
  ctx.workers = c.workers;
  const auto t0 = std::chrono::steady_clock::now();
  ctx.log = [t0](const std::string& m) {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "[" << static_cast<long>(s) << "s] " << m << "\n";
  };
  return ctx;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Team chess experiments: matches, manager training, attention analysis and reports"};
  app.require_subcommand(1);

  auto* selfcheck = app.add_subcommand("selfcheck", "perft, gradient and statistics oracles");
  std::string fault = "none";
  selfcheck->add_option("--inject-fault", fault, "none | movegen | gradient | stats");

  auto* perft = app.add_subcommand("perft", "count leaf nodes of the legal move tree");
  std::string fen = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1";
  int depth = 1;
  bool divide = false;
  perft->add_option("--fen", fen, "position");
  perft->add_option("--depth", depth, "plies")->check(CLI::Range(0, 10));
  perft->add_flag("--divide", divide, "per-move counts");

  Common common;
  std::string manager, checkpoint;
  auto* run_match = app.add_subcommand("run-match", "team and member baselines against the adversary");
  add_common(run_match, common);
  run_match->add_option("--manager", manager, "sme | rl | constant:1 | constant:2 | random");
  run_match->add_option("--checkpoint", checkpoint, "RL manager checkpoint");

  auto* train = app.add_subcommand("train-manager", "policy iteration for the RL manager");
  add_common(train, common);

  auto* analyze = app.add_subcommand("analyze", "CLS attention studies");
  add_common(analyze, common);
  analyze->add_option("--checkpoint", checkpoint, "RL manager checkpoint");

  auto* report = app.add_subcommand("report", "digest of every run under a directory");
  std::string report_dir;
  report->add_option("--out,dir", report_dir, "directory to summarize")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kOk : kUsage;
  }

  try {
    if (*selfcheck) {
      const auto rep = ex::run_selfcheck(ex::fault_from_string(fault), [](const ex::CheckLine& l) {
        std::cout << (l.pass ? "PASS " : "FAIL ") << l.name << ": " << l.detail << std::endl;
      });
      std::cout << (rep.passed() ? "selfcheck passed" : "selfcheck FAILED") << "\n";
      return rep.passed() ? kOk : kCheckFailed;
    }
    if (*perft) {
      const auto s = teamchess::chess::parse_fen(fen);
      if (divide && depth > 0) {
        std::uint64_t total = 0;
        for (const auto& m : teamchess::chess::legal_moves(s)) {
          const auto n = teamchess::chess::perft(teamchess::chess::apply_move_unchecked(s, m), depth - 1);
          total += n;
          std::cout << m.uci() << ": " << n << "\n";
        }
        std::cout << "total " << total << "\n";
      } else {
        std::cout << teamchess::chess::perft(s, depth) << "\n";
      }
      return kOk;
    }
    if (*report) {
      const auto d = ex::cmd_report(report_dir);
      std::cout << d.text;
      if (!d.nothing && fs::is_directory(report_dir)) teamchess::write_file_atomic(fs::path(report_dir) / "report.txt", d.text);
      return kOk;
    }
    const auto ctx = context(common);
    const std::optional<fs::path> ckpt = checkpoint.empty() ? std::nullopt : std::optional<fs::path>(checkpoint);
    fs::path out;
    if (*run_match) {
      std::optional<ex::ManagerSpec> m;
      if (!manager.empty()) m = ex::ManagerSpec::parse(manager);
      out = ex::cmd_run_match(ctx, m, ckpt);
    } else if (*train) {
      out = ex::cmd_train_manager(ctx);
    } else if (*analyze) {
      out = ex::cmd_analyze(ctx, ckpt);
    }
    std::cout << out.string() << "\n";
    return kOk;
  } catch (const teamchess::FailureBudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kEngineFailure;
  } catch (const teamchess::ProtocolError& e) {
    std::cerr << "engine error: " << e.what() << "\n";
    return kEngineFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
