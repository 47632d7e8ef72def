#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "teamchess/chess/board.hpp"
#include "teamchess/uci/score.hpp"
#include "teamchess/uci/subprocess.hpp"

namespace teamchess::uci {

enum class HandleState { Spawned, Ready, Searching, Dead };

std::string to_string(HandleState s);

struct Timeouts {
  std::chrono::milliseconds handshake{10000};
  /// Added to movetime-limited searches.
  std::chrono::milliseconds search_grace{5000};
  /// Budget for depth- or node-limited searches.
  std::chrono::milliseconds unbounded_search{60000};
  std::chrono::milliseconds quit{2000};
};

/// Exclusive handle to one external UCI engine. Handles may be moved between
/// threads but must not be used concurrently; a second search while one is in
/// flight raises ContractError. Any protocol failure kills the process and
/// leaves the handle dead.
class EngineHandle {
 public:
  static EngineHandle spawn(const std::filesystem::path& path, const std::map<std::string, std::string>& options = {},
                            Timeouts timeouts = {}, const std::vector<std::string>& args = {});

  EngineHandle(EngineHandle&&) noexcept;
  EngineHandle& operator=(EngineHandle&&) noexcept;
  ~EngineHandle();

  const std::string& name() const { return name_; }
  const std::map<std::string, std::string>& options() const { return options_; }
  HandleState state() const { return state_; }

  chess::Move best_move(const chess::BoardState& s, const SearchLimits& limits);

  /// Last score reported by `info` lines during a search of `s`.
  EvalScore evaluate_position(const chess::BoardState& s, const SearchLimits& limits);

  /// ucinewgame + isready.
  void new_game();

  /// Sends quit, waits for exit, kills as a last resort. Idempotent.
  void shutdown();

 private:
  struct SearchReply {
    chess::Move best;
    std::optional<EvalScore> last_score;
  };

  EngineHandle() = default;
  SearchReply search(const chess::BoardState& s, const SearchLimits& limits);
  void send(const std::string& line);
  std::string expect_line(std::chrono::steady_clock::time_point deadline, const std::string& waiting_for);
  void sync(std::chrono::milliseconds timeout);
  [[noreturn]] void die(const std::string& why, bool timeout = false);
  void require_ready(const char* op) const;

  std::unique_ptr<Subprocess> process_;
  std::unique_ptr<std::mutex> busy_ = std::make_unique<std::mutex>();
  std::string name_;
  std::map<std::string, std::string> options_;
  HandleState state_ = HandleState::Dead;
  Timeouts timeouts_;
};

}  // namespace teamchess::uci
