#include "teamchess/uci/engine.hpp"

#include "teamchess/chess/fen.hpp"
#include "teamchess/chess/movegen.hpp"
#include "teamchess/uci/protocol.hpp"
#include "teamchess/util/errors.hpp"

namespace teamchess::uci {

using Clock = std::chrono::steady_clock;

std::string to_string(HandleState s) {
  switch (s) {
    case HandleState::Spawned: return "spawned";
    case HandleState::Ready: return "ready";
    case HandleState::Searching: return "searching";
    case HandleState::Dead: return "dead";
  }
  return "dead";
}

EngineHandle EngineHandle::spawn(const std::filesystem::path& path, const std::map<std::string, std::string>& options,
                                 Timeouts timeouts, const std::vector<std::string>& args) {
  EngineHandle h;
  h.timeouts_ = timeouts;
  h.options_ = options;
  h.name_ = path.filename().string();
  h.process_ = std::make_unique<Subprocess>(Subprocess::spawn(path, args));
  h.state_ = HandleState::Spawned;

  h.send("uci");
  const auto deadline = Clock::now() + timeouts.handshake;
  for (;;) {
    const std::string line = h.expect_line(deadline, "uciok");
    if (auto n = parse_id_name(line)) h.name_ = *n;
    if (line == "uciok") break;
  }
  for (const auto& [key, value] : options) h.send(format_setoption(key, value));
  h.sync(timeouts.handshake);
  h.state_ = HandleState::Ready;
  return h;
}

EngineHandle::EngineHandle(EngineHandle&& other) noexcept { *this = std::move(other); }

EngineHandle& EngineHandle::operator=(EngineHandle&& other) noexcept {
  if (this != &other) {
    shutdown();
    process_ = std::move(other.process_);
    busy_ = std::move(other.busy_);
    name_ = std::move(other.name_);
    options_ = std::move(other.options_);
    state_ = std::exchange(other.state_, HandleState::Dead);
    timeouts_ = other.timeouts_;
    if (!other.busy_) other.busy_ = std::make_unique<std::mutex>();
  }
  return *this;
}

EngineHandle::~EngineHandle() { shutdown(); }

void EngineHandle::send(const std::string& line) {
  if (!process_ || !process_->write_line(line)) die("engine closed its input while sending '" + line + "'");
}

std::string EngineHandle::expect_line(Clock::time_point deadline, const std::string& waiting_for) {
  std::string line;
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
  switch (process_->read_line(line, std::max(left, std::chrono::milliseconds(0)))) {
    case ReadStatus::Line: return line;
    case ReadStatus::Timeout: die("timed out waiting for " + waiting_for, true);
    case ReadStatus::Eof: die("engine exited while waiting for " + waiting_for);
  }
  die("unreachable");
}

void EngineHandle::sync(std::chrono::milliseconds timeout) {
  send("isready");
  const auto deadline = Clock::now() + timeout;
  while (expect_line(deadline, "readyok") != "readyok") {
  }
}

void EngineHandle::die(const std::string& why, bool timeout) {
  state_ = HandleState::Dead;
  if (process_) process_->kill();
  process_.reset();
  const std::string msg = name_ + ": " + why;
  if (timeout) throw EngineTimeout(msg);
  throw ProtocolError(msg);
}

void EngineHandle::require_ready(const char* op) const {
  if (state_ == HandleState::Dead) throw ProtocolError(std::string(op) + " on dead engine handle " + name_);
  if (state_ != HandleState::Ready)
    throw ContractError(std::string(op) + " requires a ready handle, state is " + to_string(state_));
}

EngineHandle::SearchReply EngineHandle::search(const chess::BoardState& s, const SearchLimits& limits) {
  std::unique_lock lock(*busy_, std::try_to_lock);
  if (!lock.owns_lock()) throw ContractError("engine " + name_ + " already has a search in flight");
  require_ready("search");
  const auto legal = chess::legal_moves(s);
  if (legal.empty()) throw ContractError("engines must not be queried at terminal positions");
  const std::string go = format_go(limits);

  state_ = HandleState::Searching;
  send(format_position(s));
  send(go);
  const auto budget = limits.movetime_ms ? std::chrono::milliseconds(*limits.movetime_ms) + timeouts_.search_grace
                                         : timeouts_.unbounded_search;
  const auto deadline = Clock::now() + budget;
  SearchReply reply{};
  for (;;) {
    const std::string line = expect_line(deadline, "bestmove");
    if (auto score = parse_info_score(line)) {
      reply.last_score = score;
      continue;
    }
    if (!is_bestmove_line(line)) continue;
    try {
      reply.best = parse_bestmove(line);
    } catch (const ProtocolError& e) {
      die(e.what());
    }
    break;
  }
  if (!legal.contains(reply.best)) die("illegal bestmove " + reply.best.uci() + " in " + chess::format_fen(s));
  state_ = HandleState::Ready;
  return reply;
}

chess::Move EngineHandle::best_move(const chess::BoardState& s, const SearchLimits& limits) {
  return search(s, limits).best;
}

EvalScore EngineHandle::evaluate_position(const chess::BoardState& s, const SearchLimits& limits) {
  const SearchReply reply = search(s, limits);
  if (!reply.last_score) die("no score reported before bestmove");
  return *reply.last_score;
}

void EngineHandle::new_game() {
  require_ready("ucinewgame");
  send("ucinewgame");
  sync(timeouts_.handshake);
}

void EngineHandle::shutdown() {
  if (!process_) {
    state_ = HandleState::Dead;
    return;
  }
  process_->write_line("quit");
  if (!process_->wait_for(timeouts_.quit)) process_->kill();
  process_.reset();
  state_ = HandleState::Dead;
}

}  // namespace teamchess::uci
