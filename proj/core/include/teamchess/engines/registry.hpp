#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "teamchess/engines/engine.hpp"
#include "teamchess/engines/profile.hpp"
#include "teamchess/uci/engine.hpp"

namespace teamchess::engines {

/// Environment variable holding a ':'-separated list of directories searched
/// for engine executables given by bare name.
inline constexpr const char* kEnginePathVariable = "TEAMCHESS_ENGINE_PATH";

/// An external UCI process behind the Engine interface.
class UciEngine final : public Engine {
 public:
  UciEngine(uci::EngineHandle handle, uci::SearchLimits limits);
  ~UciEngine() override;

  std::string name() const override { return handle_.name(); }
  chess::Move recommend(const chess::BoardState& s, int ply) override;
  uci::EvalScore evaluate(const chess::BoardState& s) override;
  /// External engines are not assumed to be reproducible.
  bool deterministic() const override { return false; }
  void new_game(std::uint64_t) override { handle_.new_game(); }

  uci::EngineHandle& handle() { return handle_; }

 private:
  uci::EngineHandle handle_;
  uci::SearchLimits limits_;
};

struct EngineRef {
  /// builtin URI, absolute/relative path, or bare name looked up on the search path.
  std::string ref;
  std::map<std::string, std::string> uci_options;
  std::vector<std::string> args;
  uci::SearchLimits limits = uci::SearchLimits::at_depth(1);
};

/// Resolves a bare executable name against TEAMCHESS_ENGINE_PATH, then PATH.
std::filesystem::path resolve_engine_path(const std::string& name);

/// Factory producing a fresh engine per call. Builtin URIs are parsed eagerly
/// so malformed references fail here.
EngineFactory make_engine_factory(const EngineRef& ref, const ProfileRegistry& profiles = default_profiles());

/// Display name without spawning anything.
std::string engine_display_name(const EngineRef& ref, const ProfileRegistry& profiles = default_profiles());

}  // namespace teamchess::engines
