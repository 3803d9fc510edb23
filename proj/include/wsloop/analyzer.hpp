#pragma once

// Recurrence-set analysis of monadic rules x -> psi(x,y), y.
//
// A finite recurrence set is a non-empty finite X in which every element
// has a psi-successor inside X; it exists iff the sentence built by
// build_phi_r() holds.  Whether the weak logics can also prove termination
// depends on the set of positions that have any successor being finite.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "wsloop/budget.hpp"
#include "wsloop/formula.hpp"
#include "wsloop/parser.hpp"
#include "wsloop/position.hpp"
#include "wsloop/ws1s.hpp"
#include "wsloop/ws2s.hpp"

namespace wsloop {

struct Assignment {
  std::map<std::string, Position> first_order;
  std::map<std::string, PositionSet> second_order;
};

/// A formula compiled once with the engine of its logic and queried many
/// times.  The tracks are the free variables of the formula.
class CompiledFormula {
 public:
  CompiledFormula(const Formula& f, Logic logic, Budget& budget);

  Logic logic() const { return logic_; }
  const Tracks& tracks() const;
  std::size_t num_states() const;

  bool satisfiable() const;
  /// Smallest satisfying assignment (shortest word / smallest tree).
  std::optional<Assignment> witness() const;
  /// Exact truth value under `a`; every free variable must be assigned.
  bool holds(const Assignment& a) const;

  const ws1s::WordAutomaton* word() const { return std::get_if<ws1s::WordAutomaton>(&automaton_); }
  const ws2s::TreeAutomaton* tree() const { return std::get_if<ws2s::TreeAutomaton>(&automaton_); }

 private:
  Logic logic_;
  std::variant<ws1s::WordAutomaton, ws2s::TreeAutomaton> automaton_;
};

/// exists X (exists x. x in X  &  all x. exists y. (x in X => psi & y in X))
Formula build_phi_r(const Rule& r);
/// The same with the closing condition (x in X & psi) => y in X added.
Formula build_phi_prime_r(const Rule& r);
/// Body of build_phi_r() with X left free.
Formula recurrence_body(const Rule& r);
/// Sentence stating that the positions with a successor form a finite set.
Formula finite_start_sentence(const Rule& r);

/// Successor queries S_x = {y : psi(x,y)} answered by the engine.
class SuccessorView {
 public:
  SuccessorView(const Rule& r, Budget& budget);

  bool is_successor(const Position& x, const Position& y) const;
  bool has_successor(const Position& x) const;
  /// Least successor in numeric / shortlex order, searching positions up to
  /// `horizon` (a bound on the number for WS1S, on the path length for WS2S).
  std::optional<Position> least_successor(const Position& x, std::uint32_t horizon) const;

 private:
  CompiledFormula psi_;
  CompiledFormula enabled_;
};

enum class VerdictKind { Loops, Terminates, Unknown };
enum class UnknownReason { InfiniteStartSetNoFiniteRecurrence, ResourceExceeded };

const char* to_string(VerdictKind k);
const char* to_string(UnknownReason r);

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  PositionSet witness;                 // Loops only
  std::optional<UnknownReason> reason;  // Unknown only
  std::string via;                      // which argument settled the verdict
  std::string detail;
  std::size_t peak_states = 0;
  double millis = 0;
};

bool finite_start_check(const Rule& r, Budget& budget);

/// Full pipeline: finite recurrence set, else finite start set, else unknown.
Verdict decide(const Rule& r, const Limits& limits = {});

bool check_recurrence_set(const Rule& r, const PositionSet& x, Budget& budget);
bool check_closed_recurrence_set(const Rule& r, const PositionSet& x, Budget& budget);
/// psi' => psi is valid, X' is a subset of X, and X' is a closed recurrence
/// set of r'.
bool check_refinement(const Rule& r, const Rule& r2, const PositionSet& x, const PositionSet& x2, Budget& budget);

}  // namespace wsloop
