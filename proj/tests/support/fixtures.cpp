#include "fixtures.hpp"

#include <atomic>
#include <unistd.h>

#include "teamchess/chess/fen.hpp"
#include "teamchess/chess/movegen.hpp"
#include "teamchess/chess/notation.hpp"
#include "teamchess/util/rng.hpp"

namespace fixtures {

using namespace teamchess;

chess::Move mv(const char* uci) { return *chess::Move::from_uci(uci); }

chess::BoardState fen(const char* text) { return chess::parse_fen(text); }

std::vector<chess::BoardState> random_walk(chess::BoardState s, int plies, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<chess::BoardState> out{s};
  for (int i = 0; i < plies; ++i) {
    const chess::MoveList moves = chess::legal_moves(s);
    if (moves.empty()) break;
    s = chess::apply_move(s, moves[rng.uniform_index(moves.size())]);
    out.push_back(s);
  }
  return out;
}

std::vector<chess::BoardState> sample_positions(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<chess::BoardState> out;
  while (out.size() < n) {
    const int plies = 4 + static_cast<int>(rng.uniform_index(57));
    const auto walk = random_walk(chess::BoardState::initial(), plies, rng.next());
    const auto& last = walk.back();
    if (!chess::legal_moves(last).empty()) out.push_back(last);
  }
  return out;
}

std::vector<chess::BoardState> bundled_openings() {
  return chess::load_openings(source_dir() / "data" / "openings.epd");
}

std::filesystem::path data_dir() { return TEAMCHESS_TEST_DATA_DIR; }
std::filesystem::path source_dir() { return TEAMCHESS_SOURCE_DIR; }

std::filesystem::path scratch_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("teamchess-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures
