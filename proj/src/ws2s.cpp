#include "wsloop/ws2s.hpp"

#include <functional>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "wsloop/normalize.hpp"
#include "explore.hpp"

namespace wsloop::ws2s {

TreeAutomaton::TreeAutomaton(Tracks tracks, State frontier, std::vector<bool> accepting, std::vector<State> delta)
    : tracks_(std::move(tracks)), frontier_(frontier), accepting_(std::move(accepting)), delta_(std::move(delta)) {
  const std::size_t n = accepting_.size();
  if (delta_.size() != n * n * num_symbols()) throw std::invalid_argument("TreeAutomaton: bad table size");
  if (frontier_ >= n) throw std::invalid_argument("TreeAutomaton: bad frontier state");
}

namespace {

// Transition tables hold states^2 * symbols entries.
constexpr std::size_t kMaxTableEntries = std::size_t{1} << 27;

// Builds the part of a bottom-up automaton reachable from the frontier
// state.  Pairs of discovered states are visited in a fixed order, which
// makes the numbering canonical for a given step function.  A nullopt
// result is the rejecting sink, which absorbs every pair it occurs in.
template <class Key, class Hash = std::hash<Key>>
class TreeBuilder {
 public:
  TreeBuilder(Tracks tracks, Budget* budget) : tracks_(std::move(tracks)), budget_(budget) {}

  template <class Step, class Accept>
  TreeAutomaton build(const Key& frontier, Step step, Accept accept) {
    const std::size_t nsym = std::size_t{1} << tracks_.size();
    intern(frontier);
    std::vector<State> results;
    auto apply = [&](std::size_t l, std::size_t r, Symbol a) -> State {
      if (!keys_[l] || !keys_[r]) return sink_state();
      std::optional<Key> out = step(*keys_[l], *keys_[r], a);
      return out ? intern(*out) : sink_state();
    };
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        for (Symbol a = 0; a < nsym; ++a) results.push_back(apply(j, i, a));
        if (j != i) {
          for (Symbol a = 0; a < nsym; ++a) results.push_back(apply(i, j, a));
        }
      }
    }
    const std::size_t n = keys_.size();
    std::vector<State> delta(n * n * nsym);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        for (Symbol a = 0; a < nsym; ++a) delta[(j * n + i) * nsym + a] = results[k++];
        if (j != i) {
          for (Symbol a = 0; a < nsym; ++a) delta[(i * n + j) * nsym + a] = results[k++];
        }
      }
    }
    std::vector<bool> acc(n);
    for (std::size_t i = 0; i < n; ++i) acc[i] = keys_[i] && accept(*keys_[i]);
    return TreeAutomaton(tracks_, 0, std::move(acc), std::move(delta));
  }

 private:
  State sink_state() {
    if (!sink_) {
      sink_ = static_cast<State>(keys_.size());
      keys_.push_back(std::nullopt);
      charge();
    }
    return *sink_;
  }
  State intern(const Key& k) {
    auto [it, inserted] = ids_.try_emplace(k, static_cast<State>(keys_.size()));
    if (inserted) {
      keys_.push_back(k);
      charge();
    }
    return it->second;
  }
  void charge() {
    const std::size_t n = keys_.size();
    if (budget_) budget_->charge(n);
    if (n * n * (std::size_t{1} << tracks_.size()) > kMaxTableEntries) {
      throw ResourceExceeded("tree automaton transition table too large (" + std::to_string(n) + " states, " +
                             std::to_string(tracks_.size()) + " tracks)");
    }
  }

  Tracks tracks_;
  Budget* budget_;
  std::optional<State> sink_;
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

// Seen-mask bookkeeping for first-order tracks: merging two subtrees and a
// node label must not set any singleton track twice.
std::optional<Symbol> merge_seen(Symbol left, Symbol right, Symbol here) {
  if ((left & right) || ((left | right) & here)) return std::nullopt;
  return left | right | here;
}

}  // namespace

TreeAutomaton TreeAutomaton::universe(Tracks tracks) {
  const Symbol fo = first_order_mask(tracks);
  TreeBuilder<Symbol> b(tracks, nullptr);
  return minimize(b.build(
      Symbol{0}, [&](Symbol l, Symbol r, Symbol a) { return merge_seen(l, r, a & fo); },
      [&](Symbol seen) { return seen == fo; }));
}

TreeAutomaton TreeAutomaton::empty(Tracks tracks) {
  const std::size_t nsym = std::size_t{1} << tracks.size();
  return TreeAutomaton(std::move(tracks), 0, {false}, std::vector<State>(nsym, 0));
}

// ---------------------------------------------------------------------------
// Atoms.  States summarize what a subtree contains; 0 always means "none of
// the atom's positions below", which is what the padding contains.

TreeAutomaton atom_automaton(const Formula& atom) {
  const Tracks tracks = atom_tracks(atom);
  const std::size_t xi = *track_index(tracks, atom.lhs().var);
  std::size_t yi = xi;
  if (atom.op() == Op::In) yi = *track_index(tracks, atom.var());
  else if (atom.op() != Op::Root) yi = *track_index(tracks, atom.rhs().var);

  using Step = std::function<std::optional<int>(int, int, bool, bool)>;
  Step step;
  int accepting = 0;
  switch (atom.op()) {
    case Op::In:
      // 1: x seen, inside X
      accepting = 1;
      step = [](int l, int r, bool x, bool in) -> std::optional<int> {
        const int below = (l == 1) + (r == 1);
        if (below + x > 1) return std::nullopt;
        if (x) return in ? std::optional<int>(1) : std::nullopt;
        return below;
      };
      break;
    case Op::Eq:
      // 1: x and y at the same node
      accepting = 1;
      step = [](int l, int r, bool x, bool y) -> std::optional<int> {
        if (l == 1 && r == 1) return std::nullopt;
        if (l == 1 || r == 1) return (x || y) ? std::nullopt : std::optional<int>(1);
        if (x && y) return 1;
        if (x || y) return std::nullopt;
        return 0;
      };
      break;
    case Op::Lt:
      // 1: y below, x not yet; 2: x strictly above y
      accepting = 2;
      step = [](int l, int r, bool x, bool y) -> std::optional<int> {
        if (l != 0 && r != 0) return std::nullopt;
        const int c = l != 0 ? l : r;
        if (c == 0) {
          if (x) return std::nullopt;
          return y ? 1 : 0;
        }
        if (c == 1) {
          if (y) return std::nullopt;
          return x ? 2 : 1;
        }
        if (x || y) return std::nullopt;
        return 2;
      };
      break;
    case Op::Succ0:
    case Op::Succ1: {
      // 1: y at the root of this subtree; 2: y is the required child of x
      accepting = 2;
      const bool left = atom.op() == Op::Succ0;
      step = [left](int l, int r, bool x, bool y) -> std::optional<int> {
        if (l != 0 && r != 0) return std::nullopt;
        if (l == 0 && r == 0) {
          if (x) return std::nullopt;
          return y ? 1 : 0;
        }
        const int below = left ? l : r;
        const int other = left ? r : l;
        if (below == 1 && other == 0) {
          if (x && !y) return 2;
          return std::nullopt;
        }
        if (l == 1 || r == 1) return std::nullopt;
        if (x || y) return std::nullopt;
        return 2;
      };
      break;
    }
    case Op::Root:
      // 1: x at the root of this subtree
      accepting = 1;
      step = [](int l, int r, bool x, bool) -> std::optional<int> {
        if (l != 0 || r != 0) return std::nullopt;
        return x ? 1 : 0;
      };
      break;
    default:
      throw std::invalid_argument("atom_automaton: not a WS2S basis atom");
  }
  TreeBuilder<int> b(tracks, nullptr);
  return minimize(b.build(
      0, [&](int l, int r, Symbol a) { return step(l, r, bit(a, xi), bit(a, yi)); },
      [&](int s) { return s == accepting; }));
}

// ---------------------------------------------------------------------------
// Boolean operations

TreeAutomaton product(const TreeAutomaton& l, const TreeAutomaton& r, BoolOp op, Budget& budget) {
  const Tracks tracks = merge_tracks(l.tracks(), r.tracks());
  budget.check_tracks(tracks.size());
  const auto lt = restriction_table(tracks, l.tracks());
  const auto rt = restriction_table(tracks, r.tracks());
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
  TreeBuilder<PairKey, PairHash> b(tracks, &budget);
  return minimize(b.build(
      PairKey{l.frontier(), r.frontier(), 0},
      [&](const PairKey& x, const PairKey& y, Symbol a) -> std::optional<PairKey> {
        auto seen = merge_seen(x.seen, y.seen, extract_bits(a, guard));
        if (!seen) return std::nullopt;
        return PairKey{l.next(x.l, y.l, lt[a]), r.next(x.r, y.r, rt[a]), *seen};
      },
      [&](const PairKey& k) {
        const bool la = l.accepting(k.l);
        const bool ra = r.accepting(k.r);
        return (op == BoolOp::And ? (la && ra) : (la || ra)) && k.seen == full;
      }));
}

TreeAutomaton complement(const TreeAutomaton& a, Budget& budget) {
  const Symbol fo = first_order_mask(a.tracks());
  const Symbol full = extract_bits(fo, fo);
  TreeBuilder<PairKey, PairHash> b(a.tracks(), &budget);
  return minimize(b.build(
      PairKey{a.frontier(), 0, 0},
      [&](const PairKey& x, const PairKey& y, Symbol s) -> std::optional<PairKey> {
        auto seen = merge_seen(x.seen, y.seen, extract_bits(s, fo));
        if (!seen) return std::nullopt;
        return PairKey{a.next(x.l, y.l, s), 0, *seen};
      },
      [&](const PairKey& k) { return !a.accepting(k.l) && k.seen == full; }));
}

TreeAutomaton extend_tracks(const TreeAutomaton& a, const Tracks& tracks, Budget& budget) {
  Tracks extra;
  std::set_difference(tracks.begin(), tracks.end(), a.tracks().begin(), a.tracks().end(), std::back_inserter(extra));
  if (extra.empty()) return a;
  return product(a, TreeAutomaton::universe(extra), BoolOp::And, budget);
}

// ---------------------------------------------------------------------------
// Projection

TreeAutomaton project_exists(const TreeAutomaton& a, const std::string& var, Budget& budget) {
  const auto vi = track_index(a.tracks(), var);
  if (!vi) return a;
  Tracks tracks = a.tracks();
  tracks.erase(tracks.begin() + static_cast<std::ptrdiff_t>(*vi));
  const Symbol vbit = Symbol{1} << *vi;
  const std::size_t n = a.num_states();

  // The new frontier: every state of a finite subtree that is zero on the
  // remaining tracks.  The erased variable may sit inside the padding.
  std::vector<bool> in_frontier(n);
  in_frontier[a.frontier()] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (State p = 0; p < n; ++p) {
      if (!in_frontier[p]) continue;
      for (State q = 0; q < n; ++q) {
        if (!in_frontier[q]) continue;
        for (Symbol s : {Symbol{0}, vbit}) {
          const State t = a.next(p, q, s);
          if (!in_frontier[t]) {
            in_frontier[t] = true;
            changed = true;
          }
        }
      }
    }
  }
  using Set = std::vector<State>;
  Set frontier;
  for (State s = 0; s < n; ++s) {
    if (in_frontier[s]) frontier.push_back(s);
  }

  std::vector<char> mark(n, 0);
  TreeBuilder<Set, StateSetHash> b(tracks, &budget);
  return minimize(b.build(
      frontier,
      [&](const Set& left, const Set& right, Symbol sym) -> std::optional<Set> {
        Set out;
        const Symbol s0 = insert_bit(sym, *vi, false);
        const Symbol s1 = insert_bit(sym, *vi, true);
        for (State p : left) {
          for (State q : right) {
            for (Symbol s : {s0, s1}) {
              const State t = a.next(p, q, s);
              if (!mark[t]) {
                mark[t] = 1;
                out.push_back(t);
              }
            }
          }
        }
        for (State t : out) mark[t] = 0;
        std::sort(out.begin(), out.end());
        return out;
      },
      [&](const Set& set) { return std::any_of(set.begin(), set.end(), [&](State s) { return a.accepting(s); }); }));
}

// ---------------------------------------------------------------------------
// Minimization

TreeAutomaton minimize(const TreeAutomaton& a) {
  const std::size_t nsym = a.num_symbols();
  const std::size_t n = a.num_states();

  // reachable states from the frontier
  std::vector<State> order{a.frontier()};
  std::vector<bool> seen(n);
  seen[a.frontier()] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      for (Symbol s = 0; s < nsym; ++s) {
        for (State t : {a.next(order[j], order[i], s), a.next(order[i], order[j], s)}) {
          if (!seen[t]) {
            seen[t] = true;
            order.push_back(t);
          }
        }
      }
    }
  }

  std::vector<State> cls(n, 0);
  for (State s : order) cls[s] = a.accepting(s) ? 1 : 0;
  std::size_t classes = 0;
  std::vector<State> sig(1 + 2 * order.size() * nsym);
  for (;;) {
    std::unordered_map<std::vector<State>, State, StateSetHash> ids;
    std::vector<State> next_cls(n, 0);
    for (State p : order) {
      std::size_t k = 0;
      sig[k++] = cls[p];
      for (State r : order) {
        for (Symbol s = 0; s < nsym; ++s) {
          sig[k++] = cls[a.next(p, r, s)];
          sig[k++] = cls[a.next(r, p, s)];
        }
      }
      auto [it, ins] = ids.try_emplace(sig, static_cast<State>(ids.size()));
      next_cls[p] = it->second;
    }
    const std::size_t count = ids.size();
    cls.swap(next_cls);
    if (count == classes) break;
    classes = count;
  }

  std::vector<State> rep(classes);
  for (State s : order) rep[cls[s]] = s;
  TreeBuilder<State> b(a.tracks(), nullptr);
  return b.build(
      cls[a.frontier()],
      [&](State l, State r, Symbol s) -> std::optional<State> { return cls[a.next(rep[l], rep[r], s)]; },
      [&](State c) { return a.accepting(rep[c]); });
}

bool padding_closed(const TreeAutomaton& a) {
  const TreeAutomaton m = minimize(a);
  return m.next(m.frontier(), m.frontier(), 0) == m.frontier();
}

// ---------------------------------------------------------------------------
// Compilation

TreeAutomaton compile(const Formula& f, Budget& budget) {
  switch (f.op()) {
    case Op::Eq: case Op::Lt: case Op::In: case Op::Succ0: case Op::Succ1: case Op::Root:
      if (!is_normalized(f)) throw std::invalid_argument("compile: formula is not normalized");
      return atom_automaton(f);
    case Op::Not:
      return complement(compile(f.child(0), budget), budget);
    case Op::And:
    case Op::Or: {
      const TreeAutomaton l = compile(f.child(0), budget);
      const TreeAutomaton r = compile(f.child(1), budget);
      return product(l, r, f.op() == Op::And ? BoolOp::And : BoolOp::Or, budget);
    }
    case Op::ExistsFO:
    case Op::ExistsSO:
      return project_exists(compile(f.child(0), budget), f.var(), budget);
    default:
      throw std::invalid_argument("compile: formula is not a normalized WS2S formula");
  }
}

TreeAutomaton compile(const Formula& f, const Tracks& tracks, Budget& budget) {
  TreeAutomaton a = compile(f, budget);
  for (const auto& t : a.tracks()) {
    if (!track_index(tracks, t)) throw std::invalid_argument("compile: free variable '" + t + "' has no track");
  }
  return extend_tracks(a, tracks, budget);
}

// ---------------------------------------------------------------------------
// Runs, emptiness, witnesses

namespace {

State run_at(const TreeAutomaton& a, const LabeledTree& t, const Path& p) {
  auto it = t.labels.find(p);
  if (it == t.labels.end()) return a.frontier();
  return a.next(run_at(a, t, p + '0'), run_at(a, t, p + '1'), it->second);
}

}  // namespace

State run(const TreeAutomaton& a, const LabeledTree& t) { return run_at(a, t, ""); }

bool accepts_tree(const TreeAutomaton& a, const LabeledTree& t) { return a.accepting(run(a, t)); }

bool is_empty(const TreeAutomaton& a) { return !smallest_witness_tree(a).has_value(); }

std::optional<LabeledTree> smallest_witness_tree(const TreeAutomaton& a) {
  struct Best {
    std::size_t size = 0;
    std::vector<Symbol> preorder;  // label+1 per node, 0 per missing subtree
    State left = 0;
    State right = 0;
    Symbol label = 0;
  };
  const std::size_t n = a.num_states();
  std::vector<std::optional<Best>> best(n);
  best[a.frontier()] = Best{0, {0}, 0, 0, 0};
  auto better = [](std::size_t size, const std::vector<Symbol>& pre, const Best& cur) {
    return size != cur.size ? size < cur.size : pre < cur.preorder;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (State l = 0; l < n; ++l) {
      if (!best[l]) continue;
      for (State r = 0; r < n; ++r) {
        if (!best[r]) continue;
        for (Symbol s = 0; s < a.num_symbols(); ++s) {
          const State t = a.next(l, r, s);
          const std::size_t size = best[l]->size + best[r]->size + 1;
          if (best[t] && size > best[t]->size) continue;
          std::vector<Symbol> pre{s + 1};
          pre.insert(pre.end(), best[l]->preorder.begin(), best[l]->preorder.end());
          pre.insert(pre.end(), best[r]->preorder.begin(), best[r]->preorder.end());
          if (!best[t] || better(size, pre, *best[t])) {
            best[t] = Best{size, std::move(pre), l, r, s};
            changed = true;
          }
        }
      }
    }
  }
  std::optional<State> target;
  for (State s = 0; s < n; ++s) {
    if (!a.accepting(s) || !best[s]) continue;
    if (!target || better(best[s]->size, best[s]->preorder, *best[*target])) target = s;
  }
  if (!target) return std::nullopt;
  LabeledTree tree;
  std::function<void(State, const Path&)> emit = [&](State s, const Path& p) {
    const Best& b = *best[s];
    if (b.size == 0) return;
    tree.labels[p] = b.label;
    emit(b.left, p + '0');
    emit(b.right, p + '1');
  };
  emit(*target, "");
  return tree;
}

LabeledTree encode(const Valuation& v, const Tracks& tracks) {
  LabeledTree t;
  auto mark = [&](const Path& p, std::size_t track) {
    for (std::size_t k = 0; k <= p.size(); ++k) t.labels.try_emplace(p.substr(0, k), 0);
    t.labels[p] |= Symbol{1} << track;
  };
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    const auto& name = tracks[i];
    if (is_second_order(name)) {
      auto it = v.second_order.find(name);
      if (it == v.second_order.end()) throw std::invalid_argument("no value for set variable '" + name + "'");
      for (const auto& p : it->second) mark(p, i);
    } else {
      auto it = v.first_order.find(name);
      if (it == v.first_order.end()) throw std::invalid_argument("no value for variable '" + name + "'");
      mark(it->second, i);
    }
  }
  return t;
}

Valuation decode_witness(const LabeledTree& t, const Tracks& tracks) {
  Valuation v;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    PathSet ones;
    for (const auto& [p, label] : t.labels) {
      if (bit(label, i)) ones.insert(p);
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

bool accepts(const TreeAutomaton& a, const Valuation& v) { return accepts_tree(a, encode(v, a.tracks())); }

std::string format_tree(const LabeledTree& t, const Tracks& tracks) {
  std::ostringstream os;
  std::function<void(const Path&)> visit = [&](const Path& p) {
    auto it = t.labels.find(p);
    if (it == t.labels.end()) return;
    os << std::string(2 * p.size(), ' ') << (p.empty() ? "e" : p) << ':';
    for (std::size_t i = 0; i < tracks.size(); ++i) os << ' ' << tracks[i] << '=' << bit(it->second, i);
    os << '\n';
    visit(p + '0');
    visit(p + '1');
  };
  visit("");
  return os.str();
}

}  // namespace wsloop::ws2s
