#include "wsloop/normalize.hpp"

#include <string>
#include <vector>

namespace wsloop {

namespace {

class NameSupply {
 public:
  explicit NameSupply(const Formula& f) {
    for (const auto& v : all_vars(f)) {
      if (v.rfind("_v", 0) == 0 && v.size() > 2) {
        try {
          next_ = std::max(next_, std::stoul(v.substr(2)) + 1);
        } catch (const std::exception&) {
        }
      }
    }
  }
  std::string fresh() { return "_v" + std::to_string(next_++); }

 private:
  unsigned long next_ = 0;
};

// One link of a desugared term: `var` is existentially bound and `link`
// ties it to the previous element of the chain.
struct Link {
  std::string var;
  Formula link;
};

struct Flattened {
  std::vector<Link> chain;
  std::string result;
};

Formula step_atom(char step, const std::string& from, const std::string& to) {
  switch (step) {
    case '+': return Formula::succ(from, to);
    case '0': return Formula::succ0(from, to);
    default: return Formula::succ1(from, to);
  }
}

std::string steps_of(const Term& t) {
  if (!t.path.empty()) return t.path;
  return std::string(t.offset, '+');
}

// Flattens `t`.  When `target` is given, the last element of the chain is
// that variable instead of a fresh one.
Flattened flatten(const Term& t, NameSupply& names, const std::string* target) {
  Flattened out;
  const std::string steps = steps_of(t);
  std::string current;
  auto land = [&](bool last) {
    if (last && target) return *target;
    std::string v = names.fresh();
    return v;
  };
  if (t.base == Term::Base::Var) {
    current = t.var;
    if (steps.empty() && target) {
      // bare variable against a variable: caller emits the atom itself
      out.result = current;
      return out;
    }
  } else {
    const bool last = steps.empty();
    current = land(last);
    Formula anchor = t.base == Term::Base::Zero ? Formula::zero(current) : Formula::root(current);
    if (last && target) {
      out.chain.push_back({"", anchor});
    } else {
      out.chain.push_back({current, anchor});
    }
  }
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const bool last = i + 1 == steps.size();
    std::string next = land(last);
    Formula link = step_atom(steps[i], current, next);
    out.chain.push_back({last && target ? std::string() : next, link});
    current = next;
  }
  out.result = current;
  return out;
}

// Wraps `core` as  ex v1: (l1 & ex v2: (l2 & ... core)).  Links with an
// empty variable bind nothing (they target an existing variable).
Formula wrap(const std::vector<Link>& chain, Formula core) {
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    core = Formula::conj(it->link, core);
    if (!it->var.empty()) core = Formula::quantify(Op::ExistsFO, it->var, core);
  }
  return core;
}

Formula concat_chains(const Flattened& a, const Flattened& b, Formula core) {
  return wrap(a.chain, wrap(b.chain, core));
}

Formula normalize_eq(const Term& l, const Term& r, NameSupply& names) {
  if (l.is_bare_var() && r.is_bare_var()) return Formula::eq(Term::variable(l.var), Term::variable(r.var));
  if (r.is_bare_var() || l.is_bare_var()) {
    const Term& compound = r.is_bare_var() ? l : r;
    const std::string& target = r.is_bare_var() ? r.var : l.var;
    Flattened f = flatten(compound, names, &target);
    // The final link is the atom itself: peel it out as the core.
    Formula core = f.chain.back().link;
    f.chain.pop_back();
    return wrap(f.chain, core);
  }
  Flattened a = flatten(l, names, nullptr);
  Flattened b = flatten(r, names, nullptr);
  return concat_chains(a, b, Formula::eq(Term::variable(a.result), Term::variable(b.result)));
}

Formula normalize_lt(const Term& l, const Term& r, NameSupply& names) {
  Flattened a = flatten(l, names, nullptr);
  Flattened b = flatten(r, names, nullptr);
  return concat_chains(a, b, Formula::lt(Term::variable(a.result), Term::variable(b.result)));
}

Formula normalize_in(const Term& t, const std::string& set, NameSupply& names) {
  Flattened a = flatten(t, names, nullptr);
  return wrap(a.chain, Formula::in(Term::variable(a.result), set));
}

Formula negate(Formula f) {
  if (f.op() == Op::Not) return f.child(0);
  return Formula::negate(f);
}

Formula norm(const Formula& f, NameSupply& names) {
  switch (f.op()) {
    case Op::Eq: return normalize_eq(f.lhs(), f.rhs(), names);
    case Op::Lt: return normalize_lt(f.lhs(), f.rhs(), names);
    case Op::Leq:
      return Formula::disj(normalize_lt(f.lhs(), f.rhs(), names), normalize_eq(f.lhs(), f.rhs(), names));
    case Op::In: return normalize_in(f.lhs(), f.var(), names);
    case Op::Succ: case Op::Succ0: case Op::Succ1: case Op::Zero: case Op::Root:
      return f;
    case Op::Not: return negate(norm(f.child(0), names));
    case Op::And: return Formula::conj(norm(f.child(0), names), norm(f.child(1), names));
    case Op::Or: return Formula::disj(norm(f.child(0), names), norm(f.child(1), names));
    case Op::Implies: return Formula::disj(negate(norm(f.child(0), names)), norm(f.child(1), names));
    case Op::Iff: {
      const Formula a = norm(f.child(0), names);
      const Formula b = norm(f.child(1), names);
      return Formula::disj(Formula::conj(a, b), Formula::conj(negate(a), negate(b)));
    }
    case Op::ExistsFO: case Op::ExistsSO:
      return Formula::quantify(f.op(), f.var(), norm(f.child(0), names));
    case Op::ForallFO:
      return negate(Formula::quantify(Op::ExistsFO, f.var(), negate(norm(f.child(0), names))));
    case Op::ForallSO:
      return negate(Formula::quantify(Op::ExistsSO, f.var(), negate(norm(f.child(0), names))));
  }
  return f;
}

}  // namespace

Formula normalize(const Formula& f) {
  NameSupply names(f);
  return norm(f, names);
}

bool is_normalized(const Formula& f) {
  switch (f.op()) {
    case Op::Eq: case Op::Lt: case Op::In:
      return f.lhs().is_bare_var() && (f.op() == Op::In || f.rhs().is_bare_var());
    case Op::Succ: case Op::Succ0: case Op::Succ1: case Op::Zero: case Op::Root:
      return true;
    case Op::Not: case Op::And: case Op::Or: case Op::ExistsFO: case Op::ExistsSO:
      for (std::size_t i = 0; i < f.arity(); ++i) {
        if (!is_normalized(f.child(i))) return false;
      }
      return true;
    default:
      return false;
  }
}

}  // namespace wsloop
