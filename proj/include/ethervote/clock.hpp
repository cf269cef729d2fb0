#pragma once

#include <atomic>
#include <functional>

#include "ethervote/crypto.hpp"

namespace ethervote {

using Clock = std::function<Timestamp()>;

/// Hand-driven clock for simulations and tests.
class ManualClock {
 public:
  explicit ManualClock(Timestamp start = 0) : now_(start) {}

  Timestamp now() const noexcept { return now_.load(); }
  void set(Timestamp t) noexcept { now_.store(t); }
  Timestamp advance(Timestamp seconds) noexcept { return now_.fetch_add(seconds) + seconds; }

  /// The returned callable refers to this clock; keep the clock alive.
  Clock as_clock() const {
    return [this] { return now(); };
  }

 private:
  std::atomic<Timestamp> now_;
};

Clock system_clock();

}  // namespace ethervote
