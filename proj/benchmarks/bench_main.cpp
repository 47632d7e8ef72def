#include <benchmark/benchmark.h>

#include <vector>

#include "teamchess/analysis/attention.hpp"
#include "teamchess/analysis/stats.hpp"
#include "teamchess/chess/fen.hpp"
#include "teamchess/chess/movegen.hpp"
#include "teamchess/engines/builtin.hpp"
#include "teamchess/engines/profile.hpp"
#include "teamchess/rl/model.hpp"
#include "teamchess/util/rng.hpp"

using namespace teamchess;

namespace {

const char* kKiwipete = "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1";

std::vector<chess::BoardState> positions(std::size_t n) {
  Rng rng(1);
  std::vector<chess::BoardState> out;
  while (out.size() < n) {
    auto s = chess::BoardState::initial();
    const int plies = 6 + static_cast<int>(rng.uniform_index(40));
    for (int i = 0; i < plies; ++i) {
      const auto moves = chess::legal_moves(s);
      if (moves.empty()) break;
      s = chess::apply_move_unchecked(s, moves[rng.uniform_index(moves.size())]);
    }
    if (!chess::legal_moves(s).empty()) out.push_back(s);
  }
  return out;
}

void BM_Perft(benchmark::State& state) {
  const auto s = chess::parse_fen(kKiwipete);
  const int depth = static_cast<int>(state.range(0));
  std::uint64_t nodes = 0;
  for (auto _ : state) {
    nodes = chess::perft(s, depth);
    benchmark::DoNotOptimize(nodes);
  }
  state.counters["nodes/s"] = benchmark::Counter(static_cast<double>(nodes), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_Perft)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_LegalMoves(benchmark::State& state) {
  const auto ps = positions(64);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(chess::legal_moves(ps[i++ % ps.size()]));
}
BENCHMARK(BM_LegalMoves);

void BM_AlphaBeta(benchmark::State& state) {
  const auto ps = positions(16);
  const auto profile = engines::neutral_profile();
  const int depth = static_cast<int>(state.range(0));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(engines::alphabeta_search(profile, ps[i++ % ps.size()], depth));
}
BENCHMARK(BM_AlphaBeta)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

void BM_Forward(benchmark::State& state) {
  const auto p = rl::init_params(rl::ArchSpec{}, 3);
  const auto ps = positions(16);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(rl::forward(p, rl::encode_board(ps[i++ % ps.size()])));
}
BENCHMARK(BM_Forward)->Unit(benchmark::kMicrosecond);

void BM_LossAndGrad(benchmark::State& state) {
  const auto p = rl::init_params(rl::ArchSpec{}, 3);
  std::vector<rl::TrainingExample> batch;
  for (const auto& s : positions(static_cast<std::size_t>(state.range(0)))) batch.push_back({s, 0, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(rl::loss_and_grad(p, batch));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LossAndGrad)->Arg(1)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_AttentionStudy(benchmark::State& state) {
  const auto p = rl::init_params(rl::ArchSpec{}, 3);
  const auto ps = positions(200);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        analysis::attention_group_study(p, ps, analysis::Grouping::PieceVsEmpty, analysis::Control::None, 1));
}
BENCHMARK(BM_AttentionStudy)->Unit(benchmark::kMillisecond);

void BM_AwRanked(benchmark::State& state) {
  Rng rng(5);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> a(n), b(n);
  for (auto& v : a) v = rng.uniform01();
  for (auto& v : b) v = rng.uniform01();
  for (auto _ : state) benchmark::DoNotOptimize(analysis::a_w_ranked(a, b));
}
BENCHMARK(BM_AwRanked)->Arg(1000)->Arg(100000);

void BM_AwPairwise(benchmark::State& state) {
  Rng rng(5);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> a(n), b(n);
  for (auto& v : a) v = rng.uniform01();
  for (auto& v : b) v = rng.uniform01();
  for (auto _ : state) benchmark::DoNotOptimize(analysis::a_w_pairwise(a, b));
}
BENCHMARK(BM_AwPairwise)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
