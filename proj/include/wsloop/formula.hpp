#pragma once

// Abstract syntax shared by the WS1S and WS2S front-ends.
//
// Formulas are immutable trees of shared nodes.  Copying a Formula is cheap
// and two Formula values compare equal when their trees are structurally
// identical.

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace wsloop {

enum class Logic { WS1S, WS2S };

const char* to_string(Logic logic);

/// Variables whose first letter is upper case range over finite sets.
bool is_second_order(const std::string& name);

/// A position term.  WS1S terms are `base + offset`, WS2S terms are
/// `base.path` with `path` over {0,1}.
struct Term {
  enum class Base { Var, Zero, Epsilon };

  Base base = Base::Var;
  std::string var;
  std::uint32_t offset = 0;
  std::string path;

  static Term variable(std::string name) { return {Base::Var, std::move(name), 0, {}}; }
  static Term numeral(std::uint32_t n) { return {Base::Zero, {}, n, {}}; }
  static Term root_path(std::string bits) { return {Base::Epsilon, {}, 0, std::move(bits)}; }
  static Term successor(std::string name, std::uint32_t n) { return {Base::Var, std::move(name), n, {}}; }
  static Term child_path(std::string name, std::string bits) {
    return {Base::Var, std::move(name), 0, std::move(bits)};
  }

  bool is_bare_var() const { return base == Base::Var && offset == 0 && path.empty(); }

  friend bool operator==(const Term&, const Term&) = default;
};

enum class Op {
  // surface atoms over terms
  Eq, Lt, Leq, In,
  // basis atoms introduced by normalize(); arguments are bare variables
  Succ, Succ0, Succ1, Zero, Root,
  Not, And, Or, Implies, Iff,
  ExistsFO, ForallFO, ExistsSO, ForallSO,
};

bool is_atom(Op op);
bool is_quantifier(Op op);

class Formula {
 public:
  // Atoms.  Eq/Lt/Succ* take (lhs, rhs); In takes a term and a set variable.
  static Formula eq(Term l, Term r);
  static Formula lt(Term l, Term r);
  static Formula leq(Term l, Term r);
  static Formula in(Term t, std::string set_var);
  static Formula succ(std::string x, std::string y);   // y = x + 1
  static Formula succ0(std::string x, std::string y);  // y = x.0
  static Formula succ1(std::string x, std::string y);  // y = x.1
  static Formula zero(std::string x);                   // x = 0
  static Formula root(std::string x);                   // x = epsilon

  static Formula negate(Formula f);
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula implies(Formula l, Formula r);
  static Formula iff(Formula l, Formula r);
  static Formula quantify(Op quantifier, std::string var, Formula body);

  // Left-nested conjunction; `parts` must be non-empty.
  static Formula conj_all(const std::vector<Formula>& parts);

  Op op() const;
  const Term& lhs() const;
  const Term& rhs() const;
  /// Set variable of In, or the bound variable of a quantifier.
  const std::string& var() const;
  std::size_t arity() const;
  const Formula& child(std::size_t i) const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

  std::size_t depth() const;
  std::size_t size() const;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Node node);
  std::shared_ptr<const Node> node_;
};

struct FreeVars {
  std::set<std::string> first_order;
  std::set<std::string> second_order;

  friend bool operator==(const FreeVars&, const FreeVars&) = default;
};

FreeVars free_vars(const Formula& f);

/// All variable names occurring in `f`, bound or free.
std::set<std::string> all_vars(const Formula& f);

/// Concrete syntax accepted by parse_formula for the given logic.
std::string pretty_print(const Formula& f, Logic logic);

}  // namespace wsloop
