#include "teamchess/team/manager.hpp"

#include "teamchess/util/errors.hpp"

namespace teamchess::team {

int to_int(MemberId k) { return static_cast<int>(k); }

MemberId member_from_int(int k) {
  if (k != 1 && k != 2) throw ContractError("member id must be 1 or 2, got " + std::to_string(k));
  return static_cast<MemberId>(k);
}

MemberId other(MemberId k) { return k == MemberId::One ? MemberId::Two : MemberId::One; }

}  // namespace teamchess::team
