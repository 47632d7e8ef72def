#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "teamchess/chess/board.hpp"
#include "teamchess/util/rng.hpp"

namespace teamchess::team {

enum class MemberId : std::uint8_t { One = 1, Two = 2 };

int to_int(MemberId k);
/// Throws ContractError unless k is 1 or 2.
MemberId member_from_int(int k);
MemberId other(MemberId k);

/// What a manager sees. Move-aware managers read `recommendations`; state-only
/// managers ignore it. When present the two moves differ.
struct DecisionContext {
  const chess::BoardState& state;
  std::optional<std::pair<chess::Move, chess::Move>> recommendations;
  int ply = 0;
  Rng& rng;
};

class Manager {
 public:
  virtual ~Manager() = default;
  virtual std::string name() const = 0;
  /// The chosen member, or nullopt when indifferent (the team then flips a
  /// seeded coin).
  virtual std::optional<MemberId> decide(const DecisionContext& ctx) = 0;
};

using ManagerFactory = std::function<std::unique_ptr<Manager>()>;

class ConstantManager final : public Manager {
 public:
  explicit ConstantManager(MemberId k) : k_(k) {}
  std::string name() const override { return "constant:" + std::to_string(to_int(k_)); }
  std::optional<MemberId> decide(const DecisionContext&) override { return k_; }

 private:
  MemberId k_;
};

/// Always indifferent, so every disagreement is a coin flip.
class RandomManager final : public Manager {
 public:
  std::string name() const override { return "random"; }
  std::optional<MemberId> decide(const DecisionContext&) override { return std::nullopt; }
};

}  // namespace teamchess::team
