#pragma once

// Graphviz renderings of automata.  Edge labels are bit patterns over the
// tracks, one character per track in track order, with '*' for don't-care.
// Output depends only on the automaton, so canonical automata give
// byte-identical files.

#include <string>
#include <vector>

#include "wsloop/ws1s.hpp"
#include "wsloop/ws2s.hpp"

namespace wsloop {

/// Covers the symbols marked in `members` (indexed by symbol over `width`
/// bits) with disjoint cubes such as "1*0".
std::vector<std::string> symbol_cubes(const std::vector<bool>& members, std::size_t width);

std::string to_dot(const ws1s::WordAutomaton& a, const std::string& title = "automaton");
/// Transitions become hyperedges drawn through small auxiliary nodes.
std::string to_dot(const ws2s::TreeAutomaton& a, const std::string& title = "automaton");

}  // namespace wsloop
