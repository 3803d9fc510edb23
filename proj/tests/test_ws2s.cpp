#include <doctest.h>

#include "support/generators.hpp"
#include "wsloop/normalize.hpp"
#include "wsloop/parser.hpp"
#include "wsloop/ws2s.hpp"

using namespace wsloop;
using namespace wsloop::ws2s;

namespace {

TreeAutomaton compile_text(const char* text, const Tracks& tracks = {}) {
  Budget budget;
  const Formula n = normalize(parse_formula(text, Logic::WS2S));
  return tracks.empty() ? compile(n, budget) : compile(n, tracks, budget);
}

// Every labeled tree whose positions have length < depth.
std::vector<LabeledTree> all_trees(std::size_t nsym, std::size_t depth) {
  std::function<std::vector<LabeledTree>(const Path&)> grow = [&](const Path& at) {
    std::vector<LabeledTree> out{LabeledTree{}};  // absent subtree
    if (at.size() >= depth) return out;
    const auto lefts = grow(at + '0');
    const auto rights = grow(at + '1');
    for (Symbol s = 0; s < nsym; ++s) {
      for (const auto& l : lefts) {
        for (const auto& r : rights) {
          LabeledTree t;
          t.labels[at] = s;
          t.labels.insert(l.labels.begin(), l.labels.end());
          t.labels.insert(r.labels.begin(), r.labels.end());
          out.push_back(std::move(t));
        }
      }
    }
    return out;
  };
  return grow("");
}

bool well_formed(const LabeledTree& t, const Tracks& tracks) {
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    if (is_second_order(tracks[i])) continue;
    int ones = 0;
    for (const auto& [p, s] : t.labels) ones += bit(s, i);
    if (ones != 1) return false;
  }
  return true;
}

Valuation xy(const char* x, const char* y) { return Valuation{{{"x", x}, {"y", y}}, {}}; }

}  // namespace

TEST_CASE("proper prefix order") {
  const auto lt = atom_automaton(Formula::lt(Term::variable("x"), Term::variable("y")));
  CHECK(accepts(lt, xy("01", "0110")));
  CHECK_FALSE(accepts(lt, xy("00", "0110")));
  CHECK_FALSE(accepts(lt, xy("01", "01")));
  CHECK(accepts(lt, xy("", "1")));
}

TEST_CASE("right successor language on small trees") {
  const auto succ = atom_automaton(Formula::succ1("x", "y"));
  REQUIRE(succ.tracks() == Tracks{"x", "y"});
  int accepted = 0;
  for (const auto& t : all_trees(4, 3)) {
    std::vector<Path> xs, ys;
    for (const auto& [p, s] : t.labels) {
      if (bit(s, 0)) xs.push_back(p);
      if (bit(s, 1)) ys.push_back(p);
    }
    const bool expected = xs.size() == 1 && ys.size() == 1 && ys[0] == xs[0] + "1";
    CHECK(accepts_tree(succ, t) == expected);
    accepted += expected;
  }
  CHECK(accepted > 0);
}

TEST_CASE("root and membership atoms") {
  const auto root = atom_automaton(Formula::root("x"));
  CHECK(accepts(root, Valuation{{{"x", ""}}, {}}));
  CHECK_FALSE(accepts(root, Valuation{{{"x", "0"}}, {}}));
  const auto in = atom_automaton(Formula::in(Term::variable("x"), "X"));
  CHECK(accepts(in, Valuation{{{"x", "10"}}, {{"X", {"", "10"}}}}));
  CHECK_FALSE(accepts(in, Valuation{{{"x", "1"}}, {{"X", {"", "10"}}}}));
}

TEST_CASE("products and complements match set operations on trees") {
  testgen::FormulaGen gen(Logic::WS2S, 7);
  const testgen::Pool pool{{"x"}, {"X"}};
  const Tracks tracks{"X", "x"};
  const auto trees = all_trees(4, 3);
  for (int i = 0; i < 10; ++i) {
    Budget budget;
    const auto a = compile(normalize(gen.formula(3, pool)), tracks, budget);
    const auto b = compile(normalize(gen.formula(3, pool)), tracks, budget);
    const auto both = product(a, b, BoolOp::And, budget);
    const auto either = product(a, b, BoolOp::Or, budget);
    const auto not_a = complement(a, budget);
    int mismatches = 0;
    for (const auto& t : trees) {
      mismatches += accepts_tree(both, t) != (accepts_tree(a, t) && accepts_tree(b, t));
      mismatches += accepts_tree(either, t) != (accepts_tree(a, t) || accepts_tree(b, t));
      mismatches += accepts_tree(not_a, t) != (well_formed(t, tracks) && !accepts_tree(a, t));
    }
    CHECK(mismatches == 0);
    CHECK(complement(not_a, budget) == a);
    CHECK(padding_closed(a));
  }
}

TEST_CASE("padding below a tree does not matter") {
  const auto a = compile_text("x < y & y in X", {"X", "x", "y"});
  const Valuation v{{{"x", "0"}, {"y", "01"}}, {{"X", {"01"}}}};
  LabeledTree t = encode(v, a.tracks());
  CHECK(accepts_tree(a, t));
  t.labels["011"] = 0;
  t.labels["1"] = 0;
  CHECK(accepts_tree(a, t));
}

TEST_CASE("successor alternation rule") {
  Budget budget;
  const auto psi = compile_text("y = x.1 | x = y.1", {"x", "y"});
  CHECK(accepts(psi, xy("", "1")));
  CHECK(accepts(psi, xy("1", "")));
  CHECK(accepts(psi, xy("1", "11")));
  CHECK_FALSE(accepts(psi, xy("1", "10")));
  CHECK(complement(complement(psi, budget), budget) == psi);

  const auto phi = compile_text("ex2 X: (ex1 x: x in X) & all1 x: ex1 y: (x in X => (y = x.1 | x = y.1) & y in X)");
  CHECK_FALSE(is_empty(phi));
}

TEST_CASE("projection") {
  Budget budget;
  CHECK(project_exists(atom_automaton(Formula::succ1("x", "y")), "y", budget) == TreeAutomaton::universe({"x"}));
  CHECK(compile_text("ex1 y: y = x.1") == TreeAutomaton::universe({"x"}));
  CHECK(compile_text("ex1 x: x = epsilon & x in X") == compile_text("epsilon in X"));
  // a position below the explicit tree can witness the quantifier
  CHECK(compile_text("ex1 z: x < z & ~z in X") == TreeAutomaton::universe({"X", "x"}));
}

TEST_CASE("recurrence sentences of tree rules") {
  const auto body7 = compile_text(
      "(ex1 x: x in X) & all1 x: ex1 y: (x in X => ((ex1 z: x < 0000 & x = z.0 & y = z.1) | "
      "(ex1 z: z.01 <= x & y = z.11) | (x = 11 & y = 000)) & y in X)");
  REQUIRE(body7.tracks() == Tracks{"X"});
  CHECK(accepts(body7, Valuation{{}, {{"X", {"11", "000", "001", "011"}}}}));
  CHECK_FALSE(accepts(body7, Valuation{{}, {{"X", {"11", "000", "001"}}}}));

  const auto phi8 = compile_text(
      "ex2 X: (ex1 x: x in X) & all1 x: ex1 y: (x in X => ((ex1 z: x = z.0 & y = z.1) | "
      "(ex1 z: x = z.1 & y = z.10)) & y in X)");
  CHECK(is_empty(phi8));

  const auto body9 = compile_text(
      "(ex1 x: x in X) & all1 x: ex1 y: (x in X => (all2 Z: (x in Z & all1 z: (z in Z => z.0 in Z & z.1 in Z)) "
      "=> y in Z) & y in X)");
  CHECK(accepts(body9, Valuation{{}, {{"X", {""}}}}));
  const auto w = smallest_witness_tree(body9);
  REQUIRE(w);
  CHECK(decode_witness(*w, {"X"}).second_order.at("X") == PathSet{""});
}

TEST_CASE("witness trees and encodings") {
  CHECK(is_empty(TreeAutomaton::empty({"x"})));
  CHECK_FALSE(smallest_witness_tree(TreeAutomaton::empty({})).has_value());
  CHECK(smallest_witness_tree(TreeAutomaton::universe({"X"})) == LabeledTree{});

  const auto w = smallest_witness_tree(compile_text("1 < x & y = x.0", {"x", "y"}));
  REQUIRE(w);
  // same size as x = 10, but an absent left child sorts first
  CHECK(decode_witness(*w, {"x", "y"}) == xy("11", "110"));
  CHECK(w->labels.size() == 4);

  const Valuation v{{{"x", "01"}}, {{"X", {"", "110"}}}};
  const LabeledTree t = encode(v, {"X", "x"});
  CHECK(t.labels.size() == 6);  // e, 0, 01, 1, 11, 110
  CHECK(decode_witness(t, {"X", "x"}) == v);

  LabeledTree two;
  two.labels[""] = 1;
  two.labels["0"] = 1;
  CHECK_THROWS_AS(decode_witness(two, {"x"}), std::invalid_argument);

  CHECK(format_tree(encode(xy("", "1"), {"x", "y"}), {"x", "y"}) == "e: x=1 y=0\n  1: x=0 y=1\n");
}

TEST_CASE("table size is bounded") {
  Budget tight(Limits{3, 16});
  CHECK_THROWS_AS(compile(normalize(parse_formula("x = 0101", Logic::WS2S)), tight), ResourceExceeded);
}
