#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wsloop/tracks.hpp"

namespace wsloop::detail {

struct StateSetHash {
  std::size_t operator()(const std::vector<State>& v) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (State s : v) {
      h ^= s;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace wsloop::detail
