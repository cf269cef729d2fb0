#include "ethervote/clock.hpp"

#include <chrono>

namespace ethervote {

Clock system_clock() {
  return [] {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
  };
}

}  // namespace ethervote
