#pragma once

#include <sys/types.h>

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace teamchess::uci {

enum class ReadStatus { Line, Timeout, Eof };

/// Child process with line-oriented pipes on stdin/stdout. The destructor
/// kills and reaps the child if it is still running.
class Subprocess {
 public:
  /// Throws SpawnError when the executable cannot be started.
  static Subprocess spawn(const std::filesystem::path& path, const std::vector<std::string>& args = {});

  Subprocess(Subprocess&& other) noexcept;
  Subprocess& operator=(Subprocess&& other) noexcept;
  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;
  ~Subprocess();

  /// Returns false if the pipe is closed.
  bool write_line(const std::string& line);

  ReadStatus read_line(std::string& out, std::chrono::milliseconds timeout);

  bool running();
  /// Waits up to `timeout` for exit; true if the child has been reaped.
  bool wait_for(std::chrono::milliseconds timeout);
  void kill();
  void close_stdin();
  pid_t pid() const { return pid_; }

 private:
  Subprocess() = default;
  void release();

  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  bool reaped_ = false;
  std::string buffer_;
};

}  // namespace teamchess::uci
