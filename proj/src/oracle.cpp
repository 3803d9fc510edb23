#include "wsloop/oracle.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>
#include <utility>

namespace wsloop::oracle {

namespace {

constexpr std::size_t kNoIndex = static_cast<std::size_t>(-1);

struct WordDomain {
  using Pos = std::uint32_t;

  static std::vector<Pos> elements(std::uint32_t bound) {
    std::vector<Pos> out(bound);
    for (std::uint32_t i = 0; i < bound; ++i) out[i] = i;
    return out;
  }
  static std::size_t index(Pos p) { return p < 64 ? p : kNoIndex; }
  static bool less(Pos a, Pos b) { return a < b; }
  static Pos constant(const Term& t) { return t.offset; }
  static Pos extend(Pos base, const Term& t) { return base + t.offset; }
  static Pos from(const Position& p) {
    if (p.is_path()) throw std::invalid_argument("tree position in a WS1S valuation");
    return p.number();
  }
  static bool succ(Pos x, Pos y, Op) { return y == x + 1; }
  static bool zero(Pos x) { return x == 0; }
};

struct TreeDomain {
  using Pos = std::string;

  static std::vector<Pos> elements(std::uint32_t bound) {
    std::vector<Pos> out;
    for (std::uint32_t len = 0; len < bound; ++len) {
      for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << len); ++bits) {
        Pos p(len, '0');
        for (std::uint32_t i = 0; i < len; ++i) {
          if ((bits >> (len - 1 - i)) & 1U) p[i] = '1';
        }
        out.push_back(std::move(p));
      }
    }
    return out;
  }
  static std::size_t index(const Pos& p) {
    if (p.size() >= 6) return kNoIndex;
    std::size_t v = 0;
    for (char c : p) v = 2 * v + (c == '1');
    return (std::size_t{1} << p.size()) - 1 + v;
  }
  static bool less(const Pos& a, const Pos& b) { return a.size() < b.size() && b.compare(0, a.size(), a) == 0; }
  static Pos constant(const Term& t) { return t.path; }
  static Pos extend(const Pos& base, const Term& t) { return base + t.path; }
  static Pos from(const Position& p) {
    if (!p.is_path()) throw std::invalid_argument("natural in a WS2S valuation");
    return p.bits();
  }
  static bool succ(const Pos& x, const Pos& y, Op op) { return y == x + (op == Op::Succ0 ? "0" : "1"); }
  static bool zero(const Pos& x) { return x.empty(); }
};

template <class D>
class Evaluator {
 public:
  using Pos = typename D::Pos;

  Evaluator(Bound bound, const Assignment& v)
      : fo_domain_(D::elements(bound.first_order)), so_size_(D::elements(bound.second_order).size()) {
    if (so_size_ > 63) throw std::invalid_argument("second-order domain larger than 63 elements");
    for (const auto& [name, p] : v.first_order) fo_.emplace_back(name, D::from(p));
    for (const auto& [name, set] : v.second_order) {
      std::uint64_t mask = 0;
      for (const auto& p : set) {
        const std::size_t i = D::index(D::from(p));
        if (i == kNoIndex) throw std::invalid_argument("set element " + format_position(p) + " outside the oracle range");
        mask |= std::uint64_t{1} << i;
      }
      so_.emplace_back(name, mask);
    }
  }

  bool eval(const Formula& f) {
    switch (f.op()) {
      case Op::Eq: return value(f.lhs()) == value(f.rhs());
      case Op::Lt: return D::less(value(f.lhs()), value(f.rhs()));
      case Op::Leq: {
        const Pos a = value(f.lhs());
        const Pos b = value(f.rhs());
        return a == b || D::less(a, b);
      }
      case Op::In: {
        const std::size_t i = D::index(value(f.lhs()));
        return i != kNoIndex && ((set(f.var()) >> i) & 1U);
      }
      case Op::Succ: case Op::Succ0: case Op::Succ1:
        return D::succ(value(f.lhs()), value(f.rhs()), f.op());
      case Op::Zero: case Op::Root:
        return D::zero(value(f.lhs()));
      case Op::Not: return !eval(f.child(0));
      case Op::And: return eval(f.child(0)) && eval(f.child(1));
      case Op::Or: return eval(f.child(0)) || eval(f.child(1));
      case Op::Implies: return !eval(f.child(0)) || eval(f.child(1));
      case Op::Iff: return eval(f.child(0)) == eval(f.child(1));
      case Op::ExistsFO: case Op::ForallFO: {
        const bool want = f.op() == Op::ExistsFO;
        for (const Pos& p : fo_domain_) {
          fo_.emplace_back(f.var(), p);
          const bool r = eval(f.child(0));
          fo_.pop_back();
          if (r == want) return want;
        }
        return !want;
      }
      case Op::ExistsSO: case Op::ForallSO: {
        const bool want = f.op() == Op::ExistsSO;
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << so_size_); ++m) {
          so_.emplace_back(f.var(), m);
          const bool r = eval(f.child(0));
          so_.pop_back();
          if (r == want) return want;
        }
        return !want;
      }
    }
    return false;
  }

 private:
  Pos value(const Term& t) const {
    if (t.base != Term::Base::Var) return D::constant(t);
    for (auto it = fo_.rbegin(); it != fo_.rend(); ++it) {
      if (it->first == t.var) return D::extend(it->second, t);
    }
    throw std::invalid_argument("unassigned variable '" + t.var + "'");
  }
  std::uint64_t set(const std::string& name) const {
    for (auto it = so_.rbegin(); it != so_.rend(); ++it) {
      if (it->first == name) return it->second;
    }
    throw std::invalid_argument("unassigned set variable '" + name + "'");
  }

  std::vector<Pos> fo_domain_;
  std::size_t so_size_;
  std::vector<std::pair<std::string, Pos>> fo_;
  std::vector<std::pair<std::string, std::uint64_t>> so_;
};

// succ[i] has bit j set when psi(d[i], d[j]) holds.
std::vector<std::uint32_t> successor_masks(const Rule& r, const std::vector<Position>& d, Bound bound) {
  if (d.size() > 15) throw std::invalid_argument("oracle domain has " + std::to_string(d.size()) + " elements (at most 15)");
  std::vector<std::uint32_t> succ(d.size(), 0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (eval_bounded(r.body, r.logic, Assignment{{{"x", d[i]}, {"y", d[j]}}, {}}, bound)) succ[i] |= 1U << j;
    }
  }
  return succ;
}

}  // namespace

std::vector<Position> domain(Logic logic, std::uint32_t bound) {
  std::vector<Position> out;
  if (logic == Logic::WS1S) {
    for (auto n : WordDomain::elements(bound)) out.push_back(Position::natural(n));
  } else {
    for (auto& p : TreeDomain::elements(bound)) out.push_back(Position::path(std::move(p)));
  }
  return out;
}

bool eval_bounded(const Formula& f, Logic logic, const Assignment& v, Bound bound) {
  if (logic == Logic::WS1S) return Evaluator<WordDomain>(bound, v).eval(f);
  return Evaluator<TreeDomain>(bound, v).eval(f);
}

std::optional<PositionSet> search_recurrence_sets(const Rule& r, Bound bound) {
  const auto d = domain(r.logic, bound.first_order);
  const auto succ = successor_masks(r, d, bound);
  const std::uint32_t n = static_cast<std::uint32_t>(d.size());

  std::vector<std::uint32_t> masks;
  for (std::uint32_t m = 1; m < (std::uint32_t{1} << n); ++m) masks.push_back(m);
  auto elements = [](std::uint32_t m) {
    std::vector<int> out;
    for (int i = 0; m; ++i, m >>= 1) {
      if (m & 1U) out.push_back(i);
    }
    return out;
  };
  std::sort(masks.begin(), masks.end(), [&](std::uint32_t a, std::uint32_t b) {
    const int pa = std::popcount(a);
    const int pb = std::popcount(b);
    return pa != pb ? pa < pb : elements(a) < elements(b);
  });
  for (std::uint32_t m : masks) {
    bool ok = true;
    for (std::uint32_t i = 0; i < n && ok; ++i) {
      if ((m >> i) & 1U) ok = (succ[i] & m) != 0;
    }
    if (ok) {
      PositionSet out;
      for (int i : elements(m)) out.insert(d[static_cast<std::size_t>(i)]);
      return out;
    }
  }
  return std::nullopt;
}

bool lasso_exists(const Rule& r, Bound bound) {
  const auto d = domain(r.logic, bound.first_order);
  const auto succ = successor_masks(r, d, bound);
  const std::size_t n = d.size();
  // iterative DFS; colour 1 = on the stack
  std::vector<int> colour(n, 0);
  for (std::size_t root = 0; root < n; ++root) {
    if (colour[root]) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    colour[root] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next == n) {
        colour[v] = 2;
        stack.pop_back();
        continue;
      }
      const std::size_t w = next++;
      if (!((succ[v] >> w) & 1U)) continue;
      if (colour[w] == 1) return true;
      if (colour[w] == 0) {
        colour[w] = 1;
        stack.emplace_back(w, 0);
      }
    }
  }
  return false;
}

const char* to_string(TraceEnd e) {
  switch (e) {
    case TraceEnd::Stuck: return "stuck";
    case TraceEnd::Truncated: return "truncated";
    case TraceEnd::Exhausted: return "exhausted";
  }
  return "?";
}

Trace simulate(const Rule& r, const Position& start, std::size_t max_steps, const SimulateOptions& options) {
  Budget budget(options.limits);
  const SuccessorView view(r, budget);
  const std::uint32_t horizon = options.horizon ? options.horizon : (r.logic == Logic::WS1S ? 1024 : 10);
  Trace t;
  t.positions.push_back(start);
  for (std::size_t step = 0; step < max_steps; ++step) {
    const Position& x = t.positions.back();
    if (!view.has_successor(x)) {
      t.end = TraceEnd::Stuck;
      return t;
    }
    std::optional<Position> y;
    if (options.within) {
      for (const auto& c : *options.within) {
        if (view.is_successor(x, c)) {
          y = c;
          break;
        }
      }
    } else {
      y = view.least_successor(x, horizon);
    }
    if (!y) {
      t.end = TraceEnd::Exhausted;
      return t;
    }
    t.positions.push_back(*y);
  }
  t.end = TraceEnd::Truncated;
  return t;
}

}  // namespace wsloop::oracle
