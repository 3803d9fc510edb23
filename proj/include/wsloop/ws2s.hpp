#pragma once

// WS2S decision procedure over deterministic bottom-up binary-tree automata.
//
// A valuation is encoded as a finite labeled tree: the prefix closure of the
// positions it mentions, each node labeled with one bit per track.  A node
// may lack one or both children; a missing subtree stands for the infinite
// all-zero padding and is assigned the frontier state.  Acceptance is read
// at the root (an empty tree evaluates to the frontier state).

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wsloop/budget.hpp"
#include "wsloop/formula.hpp"
#include "wsloop/tracks.hpp"

namespace wsloop::ws2s {

/// Tree position: a string over {0,1}, "" being the root.
using Path = std::string;

/// Shortlex order on paths: shorter first, then lexicographic.
struct ShortLex {
  bool operator()(const Path& a, const Path& b) const {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  }
};

using PathSet = std::set<Path, ShortLex>;

class TreeAutomaton {
 public:
  TreeAutomaton(Tracks tracks, State frontier, std::vector<bool> accepting, std::vector<State> delta);

  const Tracks& tracks() const { return tracks_; }
  std::size_t num_symbols() const { return std::size_t{1} << tracks_.size(); }
  std::size_t num_states() const { return accepting_.size(); }
  State frontier() const { return frontier_; }
  bool accepting(State s) const { return accepting_[s]; }
  State next(State left, State right, Symbol a) const {
    return delta_[(left * num_states() + right) * num_symbols() + a];
  }

  static TreeAutomaton universe(Tracks tracks);
  static TreeAutomaton empty(Tracks tracks);

  friend bool operator==(const TreeAutomaton&, const TreeAutomaton&) = default;

 private:
  Tracks tracks_;
  State frontier_;
  std::vector<bool> accepting_;
  std::vector<State> delta_;
};

/// Finite prefix-closed tree; absent children are padding.
struct LabeledTree {
  std::map<Path, Symbol, ShortLex> labels;

  friend bool operator==(const LabeledTree&, const LabeledTree&) = default;
};

struct Valuation {
  std::map<std::string, Path> first_order;
  std::map<std::string, PathSet> second_order;

  friend bool operator==(const Valuation&, const Valuation&) = default;
};

TreeAutomaton atom_automaton(const Formula& atom);

TreeAutomaton product(const TreeAutomaton& l, const TreeAutomaton& r, BoolOp op, Budget& budget);
TreeAutomaton complement(const TreeAutomaton& a, Budget& budget);
TreeAutomaton project_exists(const TreeAutomaton& a, const std::string& var, Budget& budget);
/// Coarsest congruence quotient, states numbered canonically from the
/// frontier state.
TreeAutomaton minimize(const TreeAutomaton& a);
TreeAutomaton extend_tracks(const TreeAutomaton& a, const Tracks& tracks, Budget& budget);

TreeAutomaton compile(const Formula& normalized, Budget& budget);
TreeAutomaton compile(const Formula& normalized, const Tracks& tracks, Budget& budget);

/// True when an all-zero leaf is equivalent to the padding below it.
bool padding_closed(const TreeAutomaton& a);

State run(const TreeAutomaton& a, const LabeledTree& t);
bool accepts_tree(const TreeAutomaton& a, const LabeledTree& t);

bool is_empty(const TreeAutomaton& a);
/// Accepted tree with the fewest nodes; ties broken by the preorder
/// sequence of labels.
std::optional<LabeledTree> smallest_witness_tree(const TreeAutomaton& a);

LabeledTree encode(const Valuation& v, const Tracks& tracks);
Valuation decode_witness(const LabeledTree& t, const Tracks& tracks);
bool accepts(const TreeAutomaton& a, const Valuation& v);

/// Renders `t` as one line per node: indented position and track bits.
std::string format_tree(const LabeledTree& t, const Tracks& tracks);

}  // namespace wsloop::ws2s
