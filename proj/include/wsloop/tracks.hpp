#pragma once

// Variable tracks shared by the word and tree engines.  A track list is a
// sorted vector of variable names; bit i of a symbol is the value of
// tracks[i] at one position.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wsloop/formula.hpp"

namespace wsloop {

using Symbol = std::uint32_t;
using State = std::uint32_t;
using Tracks = std::vector<std::string>;

enum class BoolOp { And, Or };

inline Tracks merge_tracks(const Tracks& a, const Tracks& b) {
  Tracks out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline std::optional<std::size_t> track_index(const Tracks& tracks, const std::string& name) {
  auto it = std::lower_bound(tracks.begin(), tracks.end(), name);
  if (it == tracks.end() || *it != name) return std::nullopt;
  return static_cast<std::size_t>(it - tracks.begin());
}

inline bool bit(Symbol s, std::size_t i) { return (s >> i) & 1U; }

/// For every symbol over `super`, the symbol it induces over `sub` (a subset).
inline std::vector<Symbol> restriction_table(const Tracks& super, const Tracks& sub) {
  std::vector<std::size_t> where;
  where.reserve(sub.size());
  for (const auto& name : sub) where.push_back(*track_index(super, name));
  std::vector<Symbol> table(std::size_t{1} << super.size());
  for (Symbol s = 0; s < table.size(); ++s) {
    Symbol t = 0;
    for (std::size_t j = 0; j < where.size(); ++j) t |= static_cast<Symbol>(bit(s, where[j])) << j;
    table[s] = t;
  }
  return table;
}

/// Inserts bit `value` at position `pos`, shifting higher bits up.
inline Symbol insert_bit(Symbol s, std::size_t pos, bool value) {
  const Symbol low = s & ((Symbol{1} << pos) - 1);
  const Symbol high = (s >> pos) << (pos + 1);
  return high | (static_cast<Symbol>(value) << pos) | low;
}

inline Symbol first_order_mask(const Tracks& tracks) {
  Symbol m = 0;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    if (!is_second_order(tracks[i])) m |= Symbol{1} << i;
  }
  return m;
}

/// Packs the bits of `s` selected by `mask` into the low bits.
inline Symbol extract_bits(Symbol s, Symbol mask) {
  Symbol out = 0;
  unsigned j = 0;
  for (unsigned i = 0; mask >> i; ++i) {
    if (bit(mask, i)) out |= static_cast<Symbol>(bit(s, i)) << j++;
  }
  return out;
}

}  // namespace wsloop
