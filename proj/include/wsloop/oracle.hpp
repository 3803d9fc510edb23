#pragma once

// Brute-force semantics over bounded domains, used to cross-check the
// automata engines, plus an operational simulator of rules.
//
// Bounded evaluation lets first-order quantifiers range over positions
// below a bound and second-order quantifiers over subsets of a (usually
// smaller) domain.  It is exact only when every quantifier witness fits
// inside the bounds; callers are responsible for that.

#include <cstdint>
#include <optional>
#include <vector>

#include "wsloop/analyzer.hpp"
#include "wsloop/formula.hpp"
#include "wsloop/position.hpp"

namespace wsloop::oracle {

/// Domain sizes.  WS1S: the naturals below the bound.  WS2S: the paths of
/// length below the bound.
struct Bound {
  std::uint32_t first_order = 12;
  std::uint32_t second_order = 8;
};

/// Positions of the bounded domain in increasing (shortlex) order.
std::vector<Position> domain(Logic logic, std::uint32_t bound);

/// Truth of `f` under `v`.  Set-valued assignments and second-order
/// domains are limited to 64 elements; throws std::invalid_argument beyond
/// that or when a free variable is unassigned.
bool eval_bounded(const Formula& f, Logic logic, const Assignment& v, Bound bound);

/// Smallest recurrence set inside the first-order domain (fewest elements,
/// then lexicographic), with psi evaluated by eval_bounded().  Refuses
/// domains with more than 15 elements.
std::optional<PositionSet> search_recurrence_sets(const Rule& r, Bound bound);

/// Whether the successor graph on the first-order domain has a cycle.
bool lasso_exists(const Rule& r, Bound bound);

enum class TraceEnd {
  Stuck,      // no successor at all
  Truncated,  // step limit reached
  Exhausted,  // successors exist, none allowed by the policy or horizon
};

const char* to_string(TraceEnd e);

struct Trace {
  std::vector<Position> positions;
  TraceEnd end = TraceEnd::Truncated;
};

struct SimulateOptions {
  /// Only step to successors inside this set.
  std::optional<PositionSet> within;
  /// Largest successor considered outside `within` mode: a number for WS1S,
  /// a path length for WS2S.  0 picks 1024 / 10.
  std::uint32_t horizon = 0;
  Limits limits{};
};

/// Repeatedly moves to the least successor, using exact engine queries.
Trace simulate(const Rule& r, const Position& start, std::size_t max_steps, const SimulateOptions& options = {});

}  // namespace wsloop::oracle
