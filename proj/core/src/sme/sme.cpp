#include "teamchess/sme/sme.hpp"

#include <cstdlib>
#include <iomanip>
#include <sstream>

#include "teamchess/chess/movegen.hpp"
#include "teamchess/util/errors.hpp"

namespace teamchess::sme {

std::int64_t score_move(engines::Engine& expert, const chess::BoardState& s, const chess::Move& m) {
  const chess::BoardState child = chess::apply_move(s, m);
  if (chess::legal_moves(child).empty()) return chess::is_check(child) ? uci::kMateScore : 0;
  return -expert.evaluate(child).comparable();
}

std::optional<team::MemberId> sme_prefer(engines::Engine& expert, const chess::BoardState& s, const chess::Move& a1,
                                         const chess::Move& a2, int tie_epsilon) {
  if (tie_epsilon < 0) throw ContractError("tie_epsilon must be non-negative");
  const std::int64_t v1 = score_move(expert, s, a1);
  const std::int64_t v2 = score_move(expert, s, a2);
  if (std::llabs(v1 - v2) <= tie_epsilon) return std::nullopt;
  return v1 > v2 ? team::MemberId::One : team::MemberId::Two;
}

team::MemberId sme_decide(engines::Engine& expert, const chess::BoardState& s, const chess::Move& a1,
                          const chess::Move& a2, int tie_epsilon, Rng& rng) {
  if (auto k = sme_prefer(expert, s, a1, a2, tie_epsilon)) return *k;
  return rng.coin() ? team::MemberId::Two : team::MemberId::One;
}

SmeManager::SmeManager(std::unique_ptr<engines::Engine> expert, int tie_epsilon)
    : expert_(std::move(expert)), tie_epsilon_(tie_epsilon) {
  if (tie_epsilon < 0) throw ContractError("tie_epsilon must be non-negative");
}

std::string SmeManager::name() const { return "sme(" + expert_->name() + ")"; }

std::optional<team::MemberId> SmeManager::decide(const team::DecisionContext& ctx) {
  if (!ctx.recommendations) throw ContractError("the SME manager needs both recommendations");
  return sme_prefer(*expert_, ctx.state, ctx.recommendations->first, ctx.recommendations->second, tie_epsilon_);
}

team::ManagerFactory make_sme_factory(const SmeConfig& cfg) {
  auto make_expert = engines::make_engine_factory(cfg.expert);
  const int eps = cfg.tie_epsilon;
  return [make_expert, eps] { return std::make_unique<SmeManager>(make_expert(), eps); };
}

std::vector<LadderRow> run_expertise_ladder(std::span<const SmeConfig> ladder, const engines::EngineFactory& member1,
                                            const engines::EngineFactory& member2,
                                            const engines::EngineFactory& adversary,
                                            std::span<const chess::BoardState> openings, std::uint64_t seed,
                                            const team::MatchOptions& options) {
  if (ladder.empty()) throw ContractError("expertise ladder needs at least one rung");
  std::vector<LadderRow> rows;
  for (const auto& rung : ladder) {
    LadderRow row;
    row.expert_name = engines::engine_display_name(rung.expert);
    team::MatchOptions solo_opts = options;
    solo_opts.label = options.label + "-solo-" + std::to_string(rows.size());
    row.solo = team::solo_baseline(engines::make_engine_factory(rung.expert), adversary, openings, seed, solo_opts);
    team::MatchOptions team_opts = options;
    team_opts.label = options.label + "-team-" + std::to_string(rows.size());
    row.team = team::run_match({member1, member2, make_sme_factory(rung)}, adversary, openings, seed, team_opts);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string ladder_csv(const std::vector<LadderRow>& rows) {
  std::ostringstream out;
  out << "expert_name,expert_solo_wdl,expert_solo_sem,team_wdl,team_sem,games\n" << std::setprecision(17);
  for (const auto& r : rows)
    out << '"' << r.expert_name << "\"," << r.solo.stats.wdl << ',' << r.solo.stats.sem << ',' << r.team.stats.wdl
        << ',' << r.team.stats.sem << ',' << r.team.stats.games() << '\n';
  return out.str();
}

}  // namespace teamchess::sme
