#include "wsloop/ws1s.hpp"

#include <deque>
#include <functional>
#include <stdexcept>
#include <unordered_map>

#include "wsloop/normalize.hpp"
#include "explore.hpp"

namespace wsloop::ws1s {

WordAutomaton::WordAutomaton(Tracks tracks, State initial, std::vector<bool> accepting, std::vector<State> delta)
    : tracks_(std::move(tracks)), initial_(initial), accepting_(std::move(accepting)), delta_(std::move(delta)) {
  if (delta_.size() != accepting_.size() * num_symbols()) throw std::invalid_argument("WordAutomaton: bad table size");
  if (initial_ >= accepting_.size()) throw std::invalid_argument("WordAutomaton: bad initial state");
}

State WordAutomaton::run(const Word& w) const {
  State s = initial_;
  for (Symbol a : w) s = next(s, a);
  return s;
}

namespace {

// Breadth-first construction of the reachable part of a deterministic
// automaton whose states are values of `Key`.  `step` returns nullopt for
// the rejecting sink.
template <class Key, class Hash = std::hash<Key>>
class WordBuilder {
 public:
  WordBuilder(Tracks tracks, Budget* budget) : tracks_(std::move(tracks)), budget_(budget) {}

  template <class Step, class Accept>
  WordAutomaton build(const Key& init, Step step, Accept accept) {
    const std::size_t nsym = std::size_t{1} << tracks_.size();
    std::vector<State> delta;
    std::vector<bool> acc;
    std::optional<State> sink;
    auto sink_state = [&]() {
      if (!sink) {
        sink = static_cast<State>(keys_.size());
        keys_.push_back(std::nullopt);
        charge();
      }
      return *sink;
    };
    intern(init);
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      delta.resize((i + 1) * nsym);
      if (!keys_[i]) {
        for (std::size_t a = 0; a < nsym; ++a) delta[i * nsym + a] = static_cast<State>(i);
        acc.push_back(false);
        continue;
      }
      const Key key = *keys_[i];
      acc.push_back(accept(key));
      for (Symbol a = 0; a < nsym; ++a) {
        std::optional<Key> succ = step(key, a);
        delta[i * nsym + a] = succ ? intern(*succ) : sink_state();
      }
    }
    return WordAutomaton(tracks_, 0, std::move(acc), std::move(delta));
  }

 private:
  State intern(const Key& k) {
    auto [it, inserted] = ids_.try_emplace(k, static_cast<State>(keys_.size()));
    if (inserted) {
      keys_.push_back(k);
      charge();
    }
    return it->second;
  }
  void charge() {
    if (budget_) budget_->charge(keys_.size());
  }

  Tracks tracks_;
  Budget* budget_;
  std::unordered_map<Key, State, Hash> ids_;
  std::vector<std::optional<Key>> keys_;
};

struct PairKey {
  State l;
  State r;
  Symbol seen;
  friend bool operator==(const PairKey&, const PairKey&) = default;
};

struct PairHash {
  std::size_t operator()(const PairKey& k) const {
    return std::hash<std::uint64_t>()((std::uint64_t{k.l} << 40) ^ (std::uint64_t{k.r} << 16) ^ k.seen);
  }
};

using detail::StateSetHash;

Tracks atom_tracks(const Formula& atom) {
  std::set<std::string> names;
  names.insert(atom.lhs().var);
  if (atom.op() == Op::In) names.insert(atom.var());
  else if (atom.op() != Op::Zero && atom.op() != Op::Root) names.insert(atom.rhs().var);
  return Tracks(names.begin(), names.end());
}

}  // namespace

WordAutomaton WordAutomaton::universe(Tracks tracks) {
  const Symbol fo = first_order_mask(tracks);
  const Symbol all = fo;
  WordBuilder<Symbol> b(tracks, nullptr);
  return minimize(b.build(
      Symbol{0},
      [&](Symbol seen, Symbol a) -> std::optional<Symbol> {
        const Symbol now = a & fo;
        if (seen & now) return std::nullopt;
        return seen | now;
      },
      [&](Symbol seen) { return seen == all; }));
}

WordAutomaton WordAutomaton::empty(Tracks tracks) {
  const std::size_t nsym = std::size_t{1} << tracks.size();
  return WordAutomaton(std::move(tracks), 0, {false}, std::vector<State>(nsym, 0));
}

// ---------------------------------------------------------------------------
// Atoms.  Each automaton tracks a small progress counter; reaching an
// impossible configuration (a variable seen twice, an order violated) sends
// it to the sink.

WordAutomaton atom_automaton(const Formula& atom) {
  const Tracks tracks = atom_tracks(atom);
  const std::size_t xi = *track_index(tracks, atom.lhs().var);
  std::size_t yi = xi;
  if (atom.op() == Op::In) yi = *track_index(tracks, atom.var());
  else if (atom.op() != Op::Zero) yi = *track_index(tracks, atom.rhs().var);

  using Step = std::function<std::optional<int>(int, bool, bool)>;
  Step step;
  int accepting = 0;
  switch (atom.op()) {
    case Op::Eq:
      // 0: neither seen, 1: both seen at the same position
      accepting = 1;
      step = [](int s, bool x, bool y) -> std::optional<int> {
        if (s == 0) {
          if (x && y) return 1;
          if (x || y) return std::nullopt;
          return 0;
        }
        if (x || y) return std::nullopt;
        return 1;
      };
      break;
    case Op::Lt:
      // 0: none, 1: x seen, 2: x then y
      accepting = 2;
      step = [](int s, bool x, bool y) -> std::optional<int> {
        if (s == 0) {
          if (y) return std::nullopt;
          return x ? 1 : 0;
        }
        if (x) return std::nullopt;
        if (s == 1) return y ? 2 : 1;
        if (y) return std::nullopt;
        return 2;
      };
      break;
    case Op::Succ:
      // 0: none, 1: x at the previous position, 2: done
      accepting = 2;
      step = [](int s, bool x, bool y) -> std::optional<int> {
        if (s == 0) {
          if (y) return std::nullopt;
          return x ? 1 : 0;
        }
        if (s == 1) {
          if (y && !x) return 2;
          return std::nullopt;
        }
        if (x || y) return std::nullopt;
        return 2;
      };
      break;
    case Op::Zero:
      // 0: at position 0, 1: x was at position 0
      accepting = 1;
      step = [](int s, bool x, bool) -> std::optional<int> {
        if (s == 0) return x ? std::optional<int>(1) : std::nullopt;
        if (x) return std::nullopt;
        return 1;
      };
      break;
    case Op::In:
      // 0: x not seen, 1: x seen inside X
      accepting = 1;
      step = [](int s, bool x, bool in) -> std::optional<int> {
        if (!x) return s;
        if (s == 1 || !in) return std::nullopt;
        return 1;
      };
      break;
    default:
      throw std::invalid_argument("atom_automaton: not a WS1S basis atom");
  }
  WordBuilder<int> b(tracks, nullptr);
  return minimize(b.build(
      0, [&](int s, Symbol a) { return step(s, bit(a, xi), bit(a, yi)); }, [&](int s) { return s == accepting; }));
}

// ---------------------------------------------------------------------------
// Boolean operations

WordAutomaton product(const WordAutomaton& l, const WordAutomaton& r, BoolOp op, Budget& budget) {
  const Tracks tracks = merge_tracks(l.tracks(), r.tracks());
  budget.check_tracks(tracks.size());
  const auto lt = restriction_table(tracks, l.tracks());
  const auto rt = restriction_table(tracks, r.tracks());
  // A union may accept words whose first-order tracks only one side
  // constrains; those tracks get a singleton check here.
  Symbol guard = 0;
  if (op == BoolOp::Or) {
    const Symbol fo = first_order_mask(tracks);
    for (std::size_t i = 0; i < tracks.size(); ++i) {
      const bool a = track_index(l.tracks(), tracks[i]).has_value();
      const bool b = track_index(r.tracks(), tracks[i]).has_value();
      if (a != b && bit(fo, i)) guard |= Symbol{1} << i;
    }
  }
  const Symbol full = extract_bits(guard, guard);
  WordBuilder<PairKey, PairHash> b(tracks, &budget);
  return minimize(b.build(
      PairKey{l.initial(), r.initial(), 0},
      [&](const PairKey& k, Symbol a) -> std::optional<PairKey> {
        const Symbol now = extract_bits(a, guard);
        if (k.seen & now) return std::nullopt;
        return PairKey{l.next(k.l, lt[a]), r.next(k.r, rt[a]), k.seen | now};
      },
      [&](const PairKey& k) {
        const bool la = l.accepting(k.l);
        const bool ra = r.accepting(k.r);
        return (op == BoolOp::And ? (la && ra) : (la || ra)) && k.seen == full;
      }));
}

WordAutomaton complement(const WordAutomaton& a, Budget& budget) {
  const Symbol fo = first_order_mask(a.tracks());
  const Symbol full = extract_bits(fo, fo);
  WordBuilder<PairKey, PairHash> b(a.tracks(), &budget);
  return minimize(b.build(
      PairKey{a.initial(), 0, 0},
      [&](const PairKey& k, Symbol s) -> std::optional<PairKey> {
        const Symbol now = extract_bits(s, fo);
        if (k.seen & now) return std::nullopt;
        return PairKey{a.next(k.l, s), 0, k.seen | now};
      },
      [&](const PairKey& k) { return !a.accepting(k.l) && k.seen == full; }));
}

WordAutomaton extend_tracks(const WordAutomaton& a, const Tracks& tracks, Budget& budget) {
  Tracks extra;
  std::set_difference(tracks.begin(), tracks.end(), a.tracks().begin(), a.tracks().end(), std::back_inserter(extra));
  if (extra.empty()) return a;
  return product(a, WordAutomaton::universe(extra), BoolOp::And, budget);
}

// ---------------------------------------------------------------------------
// Projection

WordAutomaton project_exists(const WordAutomaton& a, const std::string& var, Budget& budget) {
  const auto vi = track_index(a.tracks(), var);
  if (!vi) return a;
  Tracks tracks = a.tracks();
  tracks.erase(tracks.begin() + static_cast<std::ptrdiff_t>(*vi));
  const Symbol vbit = Symbol{1} << *vi;

  // States from which the padding (all-zero except the erased track) can
  // still reach acceptance: the erased variable may live beyond the end of
  // the shorter word.
  std::vector<bool> saturated(a.num_states());
  for (State s = 0; s < a.num_states(); ++s) saturated[s] = a.accepting(s);
  for (bool changed = true; changed;) {
    changed = false;
    for (State s = 0; s < a.num_states(); ++s) {
      if (saturated[s]) continue;
      if (saturated[a.next(s, 0)] || saturated[a.next(s, vbit)]) {
        saturated[s] = true;
        changed = true;
      }
    }
  }

  using Set = std::vector<State>;
  WordBuilder<Set, StateSetHash> b(tracks, &budget);
  return minimize(b.build(
      Set{a.initial()},
      [&](const Set& from, Symbol sym) -> std::optional<Set> {
        Set to;
        for (State s : from) {
          to.push_back(a.next(s, insert_bit(sym, *vi, false)));
          to.push_back(a.next(s, insert_bit(sym, *vi, true)));
        }
        std::sort(to.begin(), to.end());
        to.erase(std::unique(to.begin(), to.end()), to.end());
        return to;
      },
      [&](const Set& set) {
        return std::any_of(set.begin(), set.end(), [&](State s) { return saturated[s]; });
      }));
}

// ---------------------------------------------------------------------------
// Minimization

WordAutomaton minimize(const WordAutomaton& a) {
  const std::size_t nsym = a.num_symbols();
  // reachable states
  std::vector<State> order;
  std::vector<bool> seen(a.num_states());
  order.push_back(a.initial());
  seen[a.initial()] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (Symbol s = 0; s < nsym; ++s) {
      const State t = a.next(order[i], s);
      if (!seen[t]) {
        seen[t] = true;
        order.push_back(t);
      }
    }
  }

  // Moore refinement on the reachable states.
  std::vector<State> cls(a.num_states(), 0);
  for (State s : order) cls[s] = a.accepting(s) ? 1 : 0;
  std::size_t classes = 0;
  for (;;) {
    std::unordered_map<std::vector<State>, State, StateSetHash> sig_ids;
    std::vector<State> next_cls(a.num_states(), 0);
    std::vector<State> sig(nsym + 1);
    for (State s : order) {
      sig[0] = cls[s];
      for (Symbol x = 0; x < nsym; ++x) sig[x + 1] = cls[a.next(s, x)];
      auto [it, ins] = sig_ids.try_emplace(sig, static_cast<State>(sig_ids.size()));
      next_cls[s] = it->second;
    }
    const std::size_t n = sig_ids.size();
    cls.swap(next_cls);
    if (n == classes) break;
    classes = n;
  }

  // Canonical numbering: breadth-first from the initial class.
  std::vector<State> rep(classes);
  for (State s : order) rep[cls[s]] = s;
  std::vector<std::optional<State>> id(classes);
  std::vector<State> bfs{cls[a.initial()]};
  id[cls[a.initial()]] = 0;
  std::vector<State> delta;
  std::vector<bool> acc;
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    const State c = bfs[i];
    acc.push_back(a.accepting(rep[c]));
    for (Symbol x = 0; x < nsym; ++x) {
      const State t = cls[a.next(rep[c], x)];
      if (!id[t]) {
        id[t] = static_cast<State>(bfs.size());
        bfs.push_back(t);
      }
      delta.push_back(*id[t]);
    }
  }
  return WordAutomaton(a.tracks(), 0, std::move(acc), std::move(delta));
}

bool padding_closed(const WordAutomaton& a) {
  std::vector<bool> seen(a.num_states());
  std::vector<State> stack{a.initial()};
  seen[a.initial()] = true;
  while (!stack.empty()) {
    const State s = stack.back();
    stack.pop_back();
    if (a.accepting(s) != a.accepting(a.next(s, 0))) return false;
    for (Symbol x = 0; x < a.num_symbols(); ++x) {
      const State t = a.next(s, x);
      if (!seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Compilation

WordAutomaton compile(const Formula& f, Budget& budget) {
  switch (f.op()) {
    case Op::Eq: case Op::Lt: case Op::In: case Op::Succ: case Op::Zero:
      if (!is_normalized(f)) throw std::invalid_argument("compile: formula is not normalized");
      return atom_automaton(f);
    case Op::Not:
      return complement(compile(f.child(0), budget), budget);
    case Op::And:
    case Op::Or: {
      const WordAutomaton l = compile(f.child(0), budget);
      const WordAutomaton r = compile(f.child(1), budget);
      return product(l, r, f.op() == Op::And ? BoolOp::And : BoolOp::Or, budget);
    }
    case Op::ExistsFO:
    case Op::ExistsSO:
      return project_exists(compile(f.child(0), budget), f.var(), budget);
    default:
      throw std::invalid_argument("compile: formula is not a normalized WS1S formula");
  }
}

WordAutomaton compile(const Formula& f, const Tracks& tracks, Budget& budget) {
  WordAutomaton a = compile(f, budget);
  for (const auto& t : a.tracks()) {
    if (!track_index(tracks, t)) throw std::invalid_argument("compile: free variable '" + t + "' has no track");
  }
  return extend_tracks(a, tracks, budget);
}

// ---------------------------------------------------------------------------
// Emptiness and witnesses

bool is_empty(const WordAutomaton& a) { return !shortest_witness(a).has_value(); }

std::optional<Word> shortest_witness(const WordAutomaton& a) {
  std::vector<std::optional<std::pair<State, Symbol>>> parent(a.num_states());
  std::vector<bool> seen(a.num_states());
  std::deque<State> queue{a.initial()};
  seen[a.initial()] = true;
  while (!queue.empty()) {
    const State s = queue.front();
    queue.pop_front();
    if (a.accepting(s)) {
      Word w;
      for (State c = s; parent[c]; c = parent[c]->first) w.push_back(parent[c]->second);
      std::reverse(w.begin(), w.end());
      return w;
    }
    for (Symbol x = 0; x < a.num_symbols(); ++x) {
      const State t = a.next(s, x);
      if (!seen[t]) {
        seen[t] = true;
        parent[t] = std::make_pair(s, x);
        queue.push_back(t);
      }
    }
  }
  return std::nullopt;
}

Word encode(const Valuation& v, const Tracks& tracks) {
  std::size_t length = 0;
  std::vector<std::vector<std::uint32_t>> ones(tracks.size());
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    const auto& name = tracks[i];
    if (is_second_order(name)) {
      auto it = v.second_order.find(name);
      if (it == v.second_order.end()) throw std::invalid_argument("no value for set variable '" + name + "'");
      ones[i].assign(it->second.begin(), it->second.end());
    } else {
      auto it = v.first_order.find(name);
      if (it == v.first_order.end()) throw std::invalid_argument("no value for variable '" + name + "'");
      ones[i].push_back(it->second);
    }
    for (auto p : ones[i]) length = std::max<std::size_t>(length, std::size_t{p} + 1);
  }
  Word w(length, 0);
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    for (auto p : ones[i]) w[p] |= Symbol{1} << i;
  }
  return w;
}

Valuation decode_witness(const Word& w, const Tracks& tracks) {
  Valuation v;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    std::set<std::uint32_t> ones;
    for (std::size_t p = 0; p < w.size(); ++p) {
      if (bit(w[p], i)) ones.insert(static_cast<std::uint32_t>(p));
    }
    if (is_second_order(tracks[i])) {
      v.second_order[tracks[i]] = std::move(ones);
    } else {
      if (ones.size() != 1) {
        throw std::invalid_argument("track '" + tracks[i] + "' has " + std::to_string(ones.size()) +
                                    " set bits; a position needs exactly one");
      }
      v.first_order[tracks[i]] = *ones.begin();
    }
  }
  return v;
}

bool accepts(const WordAutomaton& a, const Valuation& v) { return a.accepts_word(encode(v, a.tracks())); }

}  // namespace wsloop::ws1s
