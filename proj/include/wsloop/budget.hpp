#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wsloop {

struct Limits {
  /// Largest intermediate automaton (in states) any construction may build.
  std::size_t max_states = 1'000'000;
  /// Largest number of variable tracks of a single automaton.
  unsigned max_tracks = 16;
};

class ResourceExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tracks the size of intermediate automata against Limits.  Constructions
/// call charge() whenever they discover a new state; crossing the cap throws
/// ResourceExceeded.
class Budget {
 public:
  Budget() = default;
  explicit Budget(Limits limits) : limits_(limits) {}

  const Limits& limits() const { return limits_; }
  std::size_t peak_states() const { return peak_; }

  void charge(std::size_t states) {
    if (states > peak_) peak_ = states;
    if (states > limits_.max_states) {
      throw ResourceExceeded("automaton exceeds " + std::to_string(limits_.max_states) + " states");
    }
  }

  void check_tracks(std::size_t tracks) const {
    if (tracks > limits_.max_tracks) {
      throw ResourceExceeded("automaton needs " + std::to_string(tracks) + " tracks (limit " +
                             std::to_string(limits_.max_tracks) + ")");
    }
  }

 private:
  Limits limits_{};
  std::size_t peak_ = 0;
};

}  // namespace wsloop
