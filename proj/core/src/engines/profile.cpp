#include "teamchess/engines/profile.hpp"

namespace teamchess::engines {
namespace {

using Table = std::array<int, 64>;

// Classical "simplified evaluation" piece-square tables, a8 first.
constexpr Table kPawn = {
    0,  0,  0,   0,   0,   0,  0,  0,  50, 50, 50,  50,  50,  50, 50, 50,
    10, 10, 20,  30,  30,  20, 10, 10, 5,  5,  10,  25,  25,  10, 5,  5,
    0,  0,  0,   20,  20,  0,  0,  0,  5,  -5, -10, 0,   0,   -10, -5, 5,
    5,  10, 10,  -20, -20, 10, 10, 5,  0,  0,  0,   0,   0,   0,  0,  0};
constexpr Table kKnight = {
    -50, -40, -30, -30, -30, -30, -40, -50, -40, -20, 0,   0,   0,   0,   -20, -40,
    -30, 0,   10,  15,  15,  10,  0,   -30, -30, 5,   15,  20,  20,  15,  5,   -30,
    -30, 0,   15,  20,  20,  15,  0,   -30, -30, 5,   10,  15,  15,  10,  5,   -30,
    -40, -20, 0,   5,   5,   0,   -20, -40, -50, -40, -30, -30, -30, -30, -40, -50};
constexpr Table kBishop = {
    -20, -10, -10, -10, -10, -10, -10, -20, -10, 0,   0,   0,   0,   0,   0,   -10,
    -10, 0,   5,   10,  10,  5,   0,   -10, -10, 5,   5,   10,  10,  5,   5,   -10,
    -10, 0,   10,  10,  10,  10,  0,   -10, -10, 10,  10,  10,  10,  10,  10,  -10,
    -10, 5,   0,   0,   0,   0,   5,   -10, -20, -10, -10, -10, -10, -10, -10, -20};
constexpr Table kRook = {
    0,  0,  0,  0,  0,  0,  0,  0,  5,  10, 10, 10, 10, 10, 10, 5,
    -5, 0,  0,  0,  0,  0,  0,  -5, -5, 0,  0,  0,  0,  0,  0,  -5,
    -5, 0,  0,  0,  0,  0,  0,  -5, -5, 0,  0,  0,  0,  0,  0,  -5,
    -5, 0,  0,  0,  0,  0,  0,  -5, 0,  0,  0,  5,  5,  0,  0,  0};
constexpr Table kQueen = {
    -20, -10, -10, -5, -5, -10, -10, -20, -10, 0,   0,   0,  0,  0,   0,   -10,
    -10, 0,   5,   5,  5,  5,   0,   -10, -5,  0,   5,   5,  5,  5,   0,   -5,
    0,   0,   5,   5,  5,  5,   0,   -5,  -10, 5,   5,   5,  5,  5,   0,   -10,
    -10, 0,   5,   0,  0,  0,   0,   -10, -20, -10, -10, -5, -5, -10, -10, -20};
constexpr Table kKing = {
    -30, -40, -40, -50, -50, -40, -40, -30, -30, -40, -40, -50, -50, -40, -40, -30,
    -30, -40, -40, -50, -50, -40, -40, -30, -30, -40, -40, -50, -50, -40, -40, -30,
    -20, -30, -30, -40, -40, -30, -30, -20, -10, -20, -20, -20, -20, -20, -20, -10,
    20,  20,  0,   0,   0,   0,   20,  20,  20,  30,  10,  0,   0,   10,  30,  20};

std::array<Table, chess::kPieceKinds> scaled_tables(int numerator, int denominator) {
  std::array<Table, chess::kPieceKinds> out{kPawn, kKnight, kBishop, kRook, kQueen, kKing};
  for (auto& t : out)
    for (int& v : t) v = v * numerator / denominator;
  return out;
}

}  // namespace

EvalProfile material_profile() {
  EvalProfile p;
  p.name = "material";
  p.material = {100, 320, 330, 500, 900, 0};
  return p;
}

EvalProfile lstyle_profile() {
  EvalProfile p = material_profile();
  p.name = "lstyle";
  p.mobility_weight = 4;
  return p;
}

EvalProfile mstyle_profile() {
  EvalProfile p = material_profile();
  p.name = "mstyle";
  p.pst = scaled_tables(2, 1);
  p.tempo_bonus = 15;
  return p;
}

EvalProfile neutral_profile() {
  EvalProfile p = material_profile();
  p.name = "neutral";
  p.pst = scaled_tables(1, 1);
  return p;
}

ProfileRegistry default_profiles() {
  ProfileRegistry r;
  for (const EvalProfile& p : {material_profile(), lstyle_profile(), mstyle_profile(), neutral_profile()})
    r.emplace(p.name, p);
  return r;
}

}  // namespace teamchess::engines
