#pragma once

// Positions of either logic and their literal syntax: decimal naturals for
// WS1S, bit strings for WS2S with "e" standing for the root.

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "wsloop/formula.hpp"

namespace wsloop {

class Position {
 public:
  static Position natural(std::uint32_t n) { return Position(n); }
  static Position path(std::string bits);

  bool is_path() const { return std::holds_alternative<std::string>(value_); }
  std::uint32_t number() const { return std::get<std::uint32_t>(value_); }
  const std::string& bits() const { return std::get<std::string>(value_); }

  /// Naturals by value, paths in shortlex order; naturals sort first.
  friend bool operator<(const Position& a, const Position& b);
  friend bool operator==(const Position&, const Position&) = default;

 private:
  explicit Position(std::uint32_t n) : value_(n) {}
  explicit Position(std::string bits) : value_(std::move(bits)) {}
  std::variant<std::uint32_t, std::string> value_;
};

using PositionSet = std::set<Position>;

/// Throws std::invalid_argument on a malformed literal.
Position parse_position(std::string_view text, Logic logic);
/// Comma-separated, whitespace allowed, may be empty.
PositionSet parse_position_set(std::string_view text, Logic logic);

std::string format_position(const Position& p);
std::string format_position_set(const PositionSet& s);

}  // namespace wsloop
