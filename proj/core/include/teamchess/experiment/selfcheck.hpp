#pragma once

#include <functional>
#include <string>
#include <vector>

namespace teamchess::experiment {

/// Deliberate defects for checking that the self-check notices them.
enum class Fault {
  None,
  /// Perft counting drops castling moves.
  Movegen,
  /// One gradient entry is perturbed before comparison.
  Gradient,
  /// The z statistic is computed with a wrong sign.
  Stats,
};

Fault fault_from_string(const std::string& s);  // ConfigError

struct CheckLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SelfcheckReport {
  std::vector<CheckLine> lines;
  bool passed() const;
};

/// Perft against published node counts, a finite-difference gradient check
/// of a small model reported per tensor, and statistics against closed forms.
SelfcheckReport run_selfcheck(Fault fault = Fault::None, const std::function<void(const CheckLine&)>& on_line = {});

}  // namespace teamchess::experiment
