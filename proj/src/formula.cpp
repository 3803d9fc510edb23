#include "wsloop/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace wsloop {

struct Formula::Node {
  Op op;
  Term lhs;
  Term rhs;
  std::string var;
  std::vector<Formula> children;
};

const char* to_string(Logic logic) { return logic == Logic::WS1S ? "ws1s" : "ws2s"; }

bool is_second_order(const std::string& name) {
  for (char c : name) {
    if (std::isalpha(static_cast<unsigned char>(c))) return std::isupper(static_cast<unsigned char>(c)) != 0;
  }
  return false;
}

bool is_atom(Op op) {
  switch (op) {
    case Op::Eq: case Op::Lt: case Op::Leq: case Op::In:
    case Op::Succ: case Op::Succ0: case Op::Succ1: case Op::Zero: case Op::Root:
      return true;
    default:
      return false;
  }
}

bool is_quantifier(Op op) {
  return op == Op::ExistsFO || op == Op::ForallFO || op == Op::ExistsSO || op == Op::ForallSO;
}

Formula Formula::make(Node node) { return Formula(std::make_shared<const Node>(std::move(node))); }

Formula Formula::eq(Term l, Term r) {
  return make({Op::Eq, std::move(l), std::move(r), {}, {}});
}
Formula Formula::lt(Term l, Term r) {
  return make({Op::Lt, std::move(l), std::move(r), {}, {}});
}
Formula Formula::leq(Term l, Term r) {
  return make({Op::Leq, std::move(l), std::move(r), {}, {}});
}
Formula Formula::in(Term t, std::string set_var) {
  return make({Op::In, std::move(t), {}, std::move(set_var), {}});
}
Formula Formula::succ(std::string x, std::string y) {
  return make({Op::Succ, Term::variable(std::move(x)), Term::variable(std::move(y)), {}, {}});
}
Formula Formula::succ0(std::string x, std::string y) {
  return make({Op::Succ0, Term::variable(std::move(x)), Term::variable(std::move(y)), {}, {}});
}
Formula Formula::succ1(std::string x, std::string y) {
  return make({Op::Succ1, Term::variable(std::move(x)), Term::variable(std::move(y)), {}, {}});
}
Formula Formula::zero(std::string x) {
  return make({Op::Zero, Term::variable(std::move(x)), {}, {}, {}});
}
Formula Formula::root(std::string x) {
  return make({Op::Root, Term::variable(std::move(x)), {}, {}, {}});
}
Formula Formula::negate(Formula f) {
  return make({Op::Not, {}, {}, {}, {std::move(f)}});
}
Formula Formula::conj(Formula l, Formula r) {
  return make({Op::And, {}, {}, {}, {std::move(l), std::move(r)}});
}
Formula Formula::disj(Formula l, Formula r) {
  return make({Op::Or, {}, {}, {}, {std::move(l), std::move(r)}});
}
Formula Formula::implies(Formula l, Formula r) {
  return make({Op::Implies, {}, {}, {}, {std::move(l), std::move(r)}});
}
Formula Formula::iff(Formula l, Formula r) {
  return make({Op::Iff, {}, {}, {}, {std::move(l), std::move(r)}});
}
Formula Formula::quantify(Op quantifier, std::string var, Formula body) {
  if (!is_quantifier(quantifier)) throw std::invalid_argument("quantify: not a quantifier");
  return make({quantifier, {}, {}, std::move(var), {std::move(body)}});
}

Formula Formula::conj_all(const std::vector<Formula>& parts) {
  if (parts.empty()) throw std::invalid_argument("conj_all: empty conjunction");
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = conj(acc, parts[i]);
  return acc;
}

Op Formula::op() const { return node_->op; }
const Term& Formula::lhs() const { return node_->lhs; }
const Term& Formula::rhs() const { return node_->rhs; }
const std::string& Formula::var() const { return node_->var; }
std::size_t Formula::arity() const { return node_->children.size(); }
const Formula& Formula::child(std::size_t i) const { return node_->children.at(i); }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.op == y.op && x.lhs == y.lhs && x.rhs == y.rhs && x.var == y.var && x.children == y.children;
}

std::size_t Formula::depth() const {
  std::size_t d = 0;
  for (const auto& c : node_->children) d = std::max(d, c.depth());
  return d + 1;
}

std::size_t Formula::size() const {
  std::size_t s = 1;
  for (const auto& c : node_->children) s += c.size();
  return s;
}

namespace {

void add_term_var(const Term& t, std::set<std::string>& bound, FreeVars& out) {
  if (t.base == Term::Base::Var && !t.var.empty() && !bound.count(t.var)) out.first_order.insert(t.var);
}

void collect_free(const Formula& f, std::set<std::string>& bound, FreeVars& out) {
  const Op op = f.op();
  if (is_atom(op)) {
    add_term_var(f.lhs(), bound, out);
    add_term_var(f.rhs(), bound, out);
    if (op == Op::In && !bound.count(f.var())) out.second_order.insert(f.var());
    return;
  }
  if (is_quantifier(op)) {
    const bool fresh = bound.insert(f.var()).second;
    collect_free(f.child(0), bound, out);
    if (fresh) bound.erase(f.var());
    return;
  }
  for (std::size_t i = 0; i < f.arity(); ++i) collect_free(f.child(i), bound, out);
}

void collect_all(const Formula& f, std::set<std::string>& out) {
  if (is_atom(f.op())) {
    for (const Term* t : {&f.lhs(), &f.rhs()}) {
      if (t->base == Term::Base::Var && !t->var.empty()) out.insert(t->var);
    }
    if (f.op() == Op::In) out.insert(f.var());
    return;
  }
  if (is_quantifier(f.op())) out.insert(f.var());
  for (std::size_t i = 0; i < f.arity(); ++i) collect_all(f.child(i), out);
}

}  // namespace

FreeVars free_vars(const Formula& f) {
  FreeVars out;
  std::set<std::string> bound;
  collect_free(f, bound, out);
  return out;
}

std::set<std::string> all_vars(const Formula& f) {
  std::set<std::string> out;
  collect_all(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Binding strength, loosest first.  Quantifier bodies extend to the right
// as far as possible, so a quantifier below any operator is parenthesized.
int precedence(Op op) {
  switch (op) {
    case Op::ExistsFO: case Op::ForallFO: case Op::ExistsSO: case Op::ForallSO: return 0;
    case Op::Iff: return 1;
    case Op::Implies: return 2;
    case Op::Or: return 3;
    case Op::And: return 4;
    case Op::Not: return 5;
    default: return 6;
  }
}

std::string term_text(const Term& t, Logic logic) {
  std::string out;
  if (logic == Logic::WS1S) {
    if (t.base == Term::Base::Zero) return std::to_string(t.offset);
    out = t.var;
    for (std::uint32_t i = 0; i < t.offset; ++i) out += " + 1";
    return out;
  }
  if (t.base == Term::Base::Epsilon) return t.path.empty() ? "epsilon" : t.path;
  out = t.var;
  if (!t.path.empty()) out += "." + t.path;
  return out;
}

const char* quantifier_keyword(Op op) {
  switch (op) {
    case Op::ExistsFO: return "ex1";
    case Op::ForallFO: return "all1";
    case Op::ExistsSO: return "ex2";
    default: return "all2";
  }
}

void print(const Formula& f, Logic logic, int required, std::ostream& os) {
  const Op op = f.op();
  const int prec = precedence(op);
  const bool parens = prec < required;
  if (parens) os << '(';
  switch (op) {
    case Op::Eq: os << term_text(f.lhs(), logic) << " = " << term_text(f.rhs(), logic); break;
    case Op::Lt: os << term_text(f.lhs(), logic) << " < " << term_text(f.rhs(), logic); break;
    case Op::Leq: os << term_text(f.lhs(), logic) << " <= " << term_text(f.rhs(), logic); break;
    case Op::In: os << term_text(f.lhs(), logic) << " in " << f.var(); break;
    case Op::Succ: os << f.rhs().var << " = " << f.lhs().var << " + 1"; break;
    case Op::Succ0: os << f.rhs().var << " = " << f.lhs().var << ".0"; break;
    case Op::Succ1: os << f.rhs().var << " = " << f.lhs().var << ".1"; break;
    case Op::Zero: os << f.lhs().var << " = 0"; break;
    case Op::Root: os << f.lhs().var << " = epsilon"; break;
    case Op::Not:
      os << '~';
      print(f.child(0), logic, 5, os);
      break;
    case Op::And:
    case Op::Or:
    case Op::Iff: {
      // left-associative
      const char* sym = op == Op::And ? " & " : op == Op::Or ? " | " : " <=> ";
      print(f.child(0), logic, prec, os);
      os << sym;
      print(f.child(1), logic, prec + 1, os);
      break;
    }
    case Op::Implies:
      // right-associative
      print(f.child(0), logic, prec + 1, os);
      os << " => ";
      print(f.child(1), logic, prec, os);
      break;
    default:
      os << quantifier_keyword(op) << ' ' << f.var() << ": ";
      print(f.child(0), logic, 0, os);
      break;
  }
  if (parens) os << ')';
}

}  // namespace

std::string pretty_print(const Formula& f, Logic logic) {
  std::ostringstream os;
  print(f, logic, 0, os);
  return os.str();
}

}  // namespace wsloop
