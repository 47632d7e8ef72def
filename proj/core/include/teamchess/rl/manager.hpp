#pragma once

#include <memory>
#include <optional>
#include <string>

#include "teamchess/rl/model.hpp"
#include "teamchess/team/manager.hpp"

namespace teamchess::rl {

/// Member with the larger logit (index 0 -> member 1); nullopt on an exact tie.
std::optional<team::MemberId> argmax_member(const std::array<double, 2>& logits);

/// argmax_member with ties broken by a coin flip from `rng`.
team::MemberId rl_decide(const ModelParams& p, const chess::BoardState& s, Rng& rng);

/// State-only manager: recommendations in the decision context are ignored.
/// Exact ties are reported as indifference.
class RlManager final : public team::Manager {
 public:
  explicit RlManager(std::shared_ptr<const ModelParams> params, std::string label = "rl");
  std::string name() const override { return label_; }
  std::optional<team::MemberId> decide(const team::DecisionContext& ctx) override;

 private:
  std::shared_ptr<const ModelParams> params_;
  std::string label_;
};

team::ManagerFactory make_rl_factory(std::shared_ptr<const ModelParams> params, std::string label = "rl");

}  // namespace teamchess::rl
