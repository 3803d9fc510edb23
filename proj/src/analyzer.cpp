#include "wsloop/analyzer.hpp"

#include <chrono>
#include <stdexcept>

#include "wsloop/normalize.hpp"

namespace wsloop {

namespace {

Tracks tracks_of(const Formula& f) {
  const FreeVars fv = free_vars(f);
  Tracks t(fv.first_order.begin(), fv.first_order.end());
  t.insert(t.end(), fv.second_order.begin(), fv.second_order.end());
  std::sort(t.begin(), t.end());
  return t;
}

std::uint32_t as_natural(const Position& p) {
  if (p.is_path()) throw std::invalid_argument("tree position '" + format_position(p) + "' given to a WS1S query");
  return p.number();
}

const std::string& as_path(const Position& p) {
  if (!p.is_path()) throw std::invalid_argument("natural '" + format_position(p) + "' given to a WS2S query");
  return p.bits();
}

ws1s::Valuation to_word_valuation(const Assignment& a) {
  ws1s::Valuation v;
  for (const auto& [name, p] : a.first_order) v.first_order[name] = as_natural(p);
  for (const auto& [name, set] : a.second_order) {
    auto& out = v.second_order[name];
    for (const auto& p : set) out.insert(as_natural(p));
  }
  return v;
}

ws2s::Valuation to_tree_valuation(const Assignment& a) {
  ws2s::Valuation v;
  for (const auto& [name, p] : a.first_order) v.first_order[name] = as_path(p);
  for (const auto& [name, set] : a.second_order) {
    auto& out = v.second_order[name];
    for (const auto& p : set) out.insert(as_path(p));
  }
  return v;
}

Term var(const char* name) { return Term::variable(name); }

Formula all1(const char* v, Formula body) { return Formula::quantify(Op::ForallFO, v, std::move(body)); }
Formula ex1(const char* v, Formula body) { return Formula::quantify(Op::ExistsFO, v, std::move(body)); }

}  // namespace

// ---------------------------------------------------------------------------

CompiledFormula::CompiledFormula(const Formula& f, Logic logic, Budget& budget)
    : logic_(logic), automaton_(ws1s::WordAutomaton::empty({})) {
  const Tracks tracks = tracks_of(f);
  budget.check_tracks(tracks.size());
  const Formula n = normalize(f);
  if (logic == Logic::WS1S) automaton_ = ws1s::compile(n, tracks, budget);
  else automaton_ = ws2s::compile(n, tracks, budget);
}

const Tracks& CompiledFormula::tracks() const {
  return word() ? word()->tracks() : tree()->tracks();
}

std::size_t CompiledFormula::num_states() const {
  return word() ? word()->num_states() : tree()->num_states();
}

bool CompiledFormula::satisfiable() const {
  return word() ? !ws1s::is_empty(*word()) : !ws2s::is_empty(*tree());
}

std::optional<Assignment> CompiledFormula::witness() const {
  Assignment out;
  if (const auto* a = word()) {
    auto w = ws1s::shortest_witness(*a);
    if (!w) return std::nullopt;
    const ws1s::Valuation v = ws1s::decode_witness(*w, a->tracks());
    for (const auto& [name, n] : v.first_order) out.first_order.emplace(name, Position::natural(n));
    for (const auto& [name, set] : v.second_order) {
      auto& s = out.second_order[name];
      for (auto n : set) s.insert(Position::natural(n));
    }
    return out;
  }
  const auto* a = tree();
  auto t = ws2s::smallest_witness_tree(*a);
  if (!t) return std::nullopt;
  const ws2s::Valuation v = ws2s::decode_witness(*t, a->tracks());
  for (const auto& [name, p] : v.first_order) out.first_order.emplace(name, Position::path(p));
  for (const auto& [name, set] : v.second_order) {
    auto& s = out.second_order[name];
    for (const auto& p : set) s.insert(Position::path(p));
  }
  return out;
}

bool CompiledFormula::holds(const Assignment& a) const {
  if (const auto* w = word()) return ws1s::accepts(*w, to_word_valuation(a));
  return ws2s::accepts(*tree(), to_tree_valuation(a));
}

// ---------------------------------------------------------------------------

Formula recurrence_body(const Rule& r) {
  const Formula x_in = Formula::in(var("x"), "X");
  const Formula y_in = Formula::in(var("y"), "X");
  const Formula step = all1("x", ex1("y", Formula::implies(x_in, Formula::conj(r.body, y_in))));
  return Formula::conj(ex1("x", x_in), step);
}

Formula build_phi_r(const Rule& r) { return Formula::quantify(Op::ExistsSO, "X", recurrence_body(r)); }

Formula build_phi_prime_r(const Rule& r) {
  const Formula x_in = Formula::in(var("x"), "X");
  const Formula y_in = Formula::in(var("y"), "X");
  const Formula closed = all1("x", all1("y", Formula::implies(Formula::conj(x_in, r.body), y_in)));
  return Formula::quantify(Op::ExistsSO, "X", Formula::conj(recurrence_body(r), closed));
}

Formula finite_start_sentence(const Rule& r) {
  const Formula enabled = ex1("y", r.body);
  if (r.logic == Logic::WS1S) {
    return ex1("m", all1("x", Formula::implies(Formula::lt(var("m"), var("x")), Formula::negate(enabled))));
  }
  return Formula::quantify(Op::ExistsSO, "Y", all1("x", Formula::implies(enabled, Formula::in(var("x"), "Y"))));
}

// ---------------------------------------------------------------------------

SuccessorView::SuccessorView(const Rule& r, Budget& budget)
    : psi_(r.body, r.logic, budget), enabled_(ex1("y", r.body), r.logic, budget) {}

bool SuccessorView::is_successor(const Position& x, const Position& y) const {
  return psi_.holds(Assignment{{{"x", x}, {"y", y}}, {}});
}

bool SuccessorView::has_successor(const Position& x) const { return enabled_.holds(Assignment{{{"x", x}}, {}}); }

std::optional<Position> SuccessorView::least_successor(const Position& x, std::uint32_t horizon) const {
  if (!has_successor(x)) return std::nullopt;
  if (psi_.logic() == Logic::WS1S) {
    for (std::uint32_t y = 0; y <= horizon; ++y) {
      if (is_successor(x, Position::natural(y))) return Position::natural(y);
    }
    return std::nullopt;
  }
  for (std::uint32_t len = 0; len <= horizon && len < 31; ++len) {
    for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << len); ++bits) {
      std::string p(len, '0');
      for (std::uint32_t i = 0; i < len; ++i) {
        if ((bits >> (len - 1 - i)) & 1U) p[i] = '1';
      }
      const Position y = Position::path(std::move(p));
      if (is_successor(x, y)) return y;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Loops: return "loops";
    case VerdictKind::Terminates: return "terminates";
    case VerdictKind::Unknown: return "unknown";
  }
  return "?";
}

const char* to_string(UnknownReason r) {
  switch (r) {
    case UnknownReason::InfiniteStartSetNoFiniteRecurrence: return "InfiniteStartSetNoFiniteRecurrence";
    case UnknownReason::ResourceExceeded: return "ResourceExceeded";
  }
  return "?";
}

bool finite_start_check(const Rule& r, Budget& budget) {
  return CompiledFormula(finite_start_sentence(r), r.logic, budget).satisfiable();
}

Verdict decide(const Rule& r, const Limits& limits) {
  const auto start = std::chrono::steady_clock::now();
  Budget budget(limits);
  Verdict v;
  try {
    CompiledFormula body(recurrence_body(r), r.logic, budget);
    if (auto w = body.witness()) {
      v.witness = w->second_order.at("X");
      if (!check_recurrence_set(r, v.witness, budget)) {
        throw std::logic_error("engine witness " + format_position_set(v.witness) + " is not a recurrence set");
      }
      v.kind = VerdictKind::Loops;
      v.via = "finite-recurrence-set";
    } else if (finite_start_check(r, budget)) {
      v.kind = VerdictKind::Terminates;
      v.via = "finite-start-set";
    } else {
      v.kind = VerdictKind::Unknown;
      v.reason = UnknownReason::InfiniteStartSetNoFiniteRecurrence;
      v.detail = "no finite recurrence set, and infinitely many positions have a successor";
    }
  } catch (const ResourceExceeded& e) {
    v = Verdict{};
    v.kind = VerdictKind::Unknown;
    v.reason = UnknownReason::ResourceExceeded;
    v.detail = e.what();
  }
  v.peak_states = budget.peak_states();
  v.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return v;
}

bool check_recurrence_set(const Rule& r, const PositionSet& x, Budget& budget) {
  if (x.empty()) return false;
  const SuccessorView s(r, budget);
  for (const auto& p : x) {
    bool found = false;
    for (const auto& q : x) {
      if (s.is_successor(p, q)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool check_closed_recurrence_set(const Rule& r, const PositionSet& x, Budget& budget) {
  if (!check_recurrence_set(r, x, budget)) return false;
  // Some element of X has a successor outside X.
  const Formula escape = ex1("x", ex1("y", Formula::conj_all({Formula::in(var("x"), "X"), r.body,
                                                             Formula::negate(Formula::in(var("y"), "X"))})));
  return !CompiledFormula(escape, r.logic, budget).holds(Assignment{{}, {{"X", x}}});
}

bool check_refinement(const Rule& r, const Rule& r2, const PositionSet& x, const PositionSet& x2, Budget& budget) {
  if (r.logic != r2.logic) throw std::invalid_argument("refinement check across different logics");
  const Formula counter = ex1("x", ex1("y", Formula::conj(r2.body, Formula::negate(r.body))));
  if (CompiledFormula(counter, r.logic, budget).satisfiable()) return false;
  if (!std::includes(x.begin(), x.end(), x2.begin(), x2.end())) return false;
  return check_closed_recurrence_set(r2, x2, budget);
}

}  // namespace wsloop
