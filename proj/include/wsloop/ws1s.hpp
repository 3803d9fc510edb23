#pragma once

// WS1S decision procedure: normalized formulas compile to deterministic,
// complete automata over the alphabet {0,1}^k, one bit track per free
// variable.  A word of length L encodes a valuation: position i belongs to
// set X iff X's bit is 1 at i, and a first-order variable is a track with a
// single 1.  Every automaton built here only accepts words whose first-order
// tracks are singletons, and acceptance is invariant under appending
// all-zero symbols.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wsloop/budget.hpp"
#include "wsloop/formula.hpp"
#include "wsloop/tracks.hpp"

namespace wsloop::ws1s {

using Word = std::vector<Symbol>;

class WordAutomaton {
 public:
  WordAutomaton(Tracks tracks, State initial, std::vector<bool> accepting, std::vector<State> delta);

  const Tracks& tracks() const { return tracks_; }
  std::size_t num_symbols() const { return std::size_t{1} << tracks_.size(); }
  std::size_t num_states() const { return accepting_.size(); }
  State initial() const { return initial_; }
  bool accepting(State s) const { return accepting_[s]; }
  State next(State s, Symbol a) const { return delta_[s * num_symbols() + a]; }
  State run(const Word& w) const;
  bool accepts_word(const Word& w) const { return accepting(run(w)); }

  /// Accepts every well-formed word over `tracks`.
  static WordAutomaton universe(Tracks tracks);
  static WordAutomaton empty(Tracks tracks);

  friend bool operator==(const WordAutomaton&, const WordAutomaton&) = default;

 private:
  Tracks tracks_;
  State initial_;
  std::vector<bool> accepting_;
  std::vector<State> delta_;
};

struct Valuation {
  std::map<std::string, std::uint32_t> first_order;
  std::map<std::string, std::set<std::uint32_t>> second_order;

  friend bool operator==(const Valuation&, const Valuation&) = default;
};

/// Automaton of a basis atom over exactly the atom's variables.
WordAutomaton atom_automaton(const Formula& atom);

WordAutomaton product(const WordAutomaton& l, const WordAutomaton& r, BoolOp op, Budget& budget);
WordAutomaton complement(const WordAutomaton& a, Budget& budget);
/// Existential projection of `var`; a no-op when `var` has no track.
WordAutomaton project_exists(const WordAutomaton& a, const std::string& var, Budget& budget);
/// Minimal automaton with states numbered in breadth-first order from the
/// initial state, so equal languages give identical values.
WordAutomaton minimize(const WordAutomaton& a);
/// Cylindrifies `a` onto a superset of its tracks.
WordAutomaton extend_tracks(const WordAutomaton& a, const Tracks& tracks, Budget& budget);

/// Compiles a normalized formula over its free variables.
WordAutomaton compile(const Formula& normalized, Budget& budget);
WordAutomaton compile(const Formula& normalized, const Tracks& tracks, Budget& budget);

/// True when every reachable state agrees on acceptance with its all-zero
/// successor, i.e. saturating acceptance over padding changes nothing.
bool padding_closed(const WordAutomaton& a);

bool is_empty(const WordAutomaton& a);
/// Shortest accepted word, least in lexicographic symbol order among those.
std::optional<Word> shortest_witness(const WordAutomaton& a);

Word encode(const Valuation& v, const Tracks& tracks);
/// Inverse of encode(); throws std::invalid_argument when a first-order
/// track does not hold exactly one 1.
Valuation decode_witness(const Word& w, const Tracks& tracks);
/// Runs `a` on the minimal encoding of `v`.  Variables of `v` without a
/// track are ignored; a track without a value throws std::invalid_argument.
bool accepts(const WordAutomaton& a, const Valuation& v);

}  // namespace wsloop::ws1s
