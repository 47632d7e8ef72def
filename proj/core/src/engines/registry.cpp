#include "teamchess/engines/registry.hpp"

#include <cstdlib>
#include <sstream>
#include <unistd.h>

#include "teamchess/chess/movegen.hpp"
#include "teamchess/engines/builtin.hpp"
#include "teamchess/util/errors.hpp"

namespace teamchess::engines {

UciEngine::UciEngine(uci::EngineHandle handle, uci::SearchLimits limits)
    : handle_(std::move(handle)), limits_(limits) {}

UciEngine::~UciEngine() { handle_.shutdown(); }

chess::Move UciEngine::recommend(const chess::BoardState& s, int) { return handle_.best_move(s, limits_); }

uci::EvalScore UciEngine::evaluate(const chess::BoardState& s) { return handle_.evaluate_position(s, limits_); }

namespace {

bool executable(const std::filesystem::path& p) {
  std::error_code ec;
  return std::filesystem::is_regular_file(p, ec) && ::access(p.c_str(), X_OK) == 0;
}

std::optional<std::filesystem::path> search_dirs(const char* variable, const std::string& name) {
  const char* value = std::getenv(variable);
  if (value == nullptr) return std::nullopt;
  std::istringstream dirs(value);
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (dir.empty()) continue;
    const auto candidate = std::filesystem::path(dir) / name;
    if (executable(candidate)) return candidate;
  }
  return std::nullopt;
}

}  // namespace

std::filesystem::path resolve_engine_path(const std::string& name) {
  if (name.find('/') != std::string::npos) return name;
  if (auto p = search_dirs(kEnginePathVariable, name)) return *p;
  if (auto p = search_dirs("PATH", name)) return *p;
  return name;
}

EngineFactory make_engine_factory(const EngineRef& ref, const ProfileRegistry& profiles) {
  if (is_builtin_uri(ref.ref)) {
    const BuiltinEngineSpec spec = parse_builtin_uri(ref.ref, profiles);
    return [spec] { return std::make_unique<BuiltinEngine>(spec); };
  }
  if (!ref.limits.valid()) throw ConfigError("engine '" + ref.ref + "' needs at least one search limit");
  const auto path = resolve_engine_path(ref.ref);
  return [path, ref] {
    return std::make_unique<UciEngine>(uci::EngineHandle::spawn(path, ref.uci_options, {}, ref.args), ref.limits);
  };
}

std::string engine_display_name(const EngineRef& ref, const ProfileRegistry& profiles) {
  if (is_builtin_uri(ref.ref)) return parse_builtin_uri(ref.ref, profiles).uri();
  return resolve_engine_path(ref.ref).filename().string();
}

}  // namespace teamchess::engines
