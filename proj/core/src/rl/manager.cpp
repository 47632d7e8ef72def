#include "teamchess/rl/manager.hpp"

#include "teamchess/util/errors.hpp"

namespace teamchess::rl {

std::optional<team::MemberId> argmax_member(const std::array<double, 2>& logits) {
  if (logits[0] == logits[1]) return std::nullopt;
  return logits[0] > logits[1] ? team::MemberId::One : team::MemberId::Two;
}

team::MemberId rl_decide(const ModelParams& p, const chess::BoardState& s, Rng& rng) {
  if (auto k = argmax_member(logits(p, encode_board(s)))) return *k;
  return rng.coin() ? team::MemberId::Two : team::MemberId::One;
}

RlManager::RlManager(std::shared_ptr<const ModelParams> params, std::string label)
    : params_(std::move(params)), label_(std::move(label)) {
  if (!params_) throw ContractError("RlManager needs parameters");
}

std::optional<team::MemberId> RlManager::decide(const team::DecisionContext& ctx) {
  return argmax_member(logits(*params_, encode_board(ctx.state)));
}

team::ManagerFactory make_rl_factory(std::shared_ptr<const ModelParams> params, std::string label) {
  if (!params) throw ContractError("RL manager factory needs parameters");
  return [params = std::move(params), label = std::move(label)] { return std::make_unique<RlManager>(params, label); };
}

}  // namespace teamchess::rl
