#pragma once

#include <stdexcept>
#include <string>

namespace teamchess {

/// Malformed textual input (FEN, UCI lines, config, checkpoints).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (illegal move, terminal query).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An engine misbehaved on the wire or died.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The engine executable could not be started.
class SpawnError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

class EngineTimeout : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

/// Non-finite values surfaced in the model or statistics.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Too many games aborted on engine failures for the statistics to be trusted.
class FailureBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A policy-iteration round produced no disagreements to learn from.
class DegenerateTeamError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace teamchess
