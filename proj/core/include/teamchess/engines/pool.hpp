#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "teamchess/engines/engine.hpp"

namespace teamchess::engines {

/// Engines are expensive for UCI back ends, so each worker checks one out per
/// game and returns it afterwards unless the game failed.
class EnginePool {
 public:
  explicit EnginePool(const EngineFactory& make) : make_(make) {}

  std::unique_ptr<Engine> take() {
    {
      std::lock_guard lock(mutex_);
      if (!idle_.empty()) {
        auto e = std::move(idle_.back());
        idle_.pop_back();
        return e;
      }
    }
    return make_();
  }

  void give_back(std::unique_ptr<Engine> e) {
    std::lock_guard lock(mutex_);
    idle_.push_back(std::move(e));
  }

 private:
  const EngineFactory& make_;
  std::mutex mutex_;
  std::vector<std::unique_ptr<Engine>> idle_;
};

}  // namespace teamchess::engines
