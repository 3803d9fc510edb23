#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "wsloop/formula.hpp"

namespace wsloop {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column);

  int line() const { return line_; }
  int column() const { return column_; }
  /// Message without the position prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::string detail_;
  int line_;
  int column_;
};

/// A monadic rule `x -> psi(x,y), y`.
struct Rule {
  std::string name;
  Logic logic = Logic::WS1S;
  Formula body;
};

Formula parse_formula(std::string_view text, Logic logic);

/// Parses a rule file:
///
///     logic: ws1s
///     rule r: x -> psi(x,y), y
///     psi(x,y) := <formula>
///
/// The formula may span several lines.  `#` starts a comment.  When
/// `logic_override` is set the `logic:` line is optional and the override
/// wins over it.
Rule parse_rule(std::string_view text, std::optional<Logic> logic_override = std::nullopt);

/// Checks the rule contract: the free variables of the body are among the
/// first-order variables x and y.  Throws std::invalid_argument otherwise.
void validate_rule(const Rule& rule);

}  // namespace wsloop
