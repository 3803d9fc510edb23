#include <doctest.h>

#include "support/generators.hpp"
#include "wsloop/normalize.hpp"
#include "wsloop/parser.hpp"
#include "wsloop/ws1s.hpp"

using namespace wsloop;
using namespace wsloop::ws1s;

namespace {

WordAutomaton compile_text(const char* text, const Tracks& tracks = {}) {
  Budget budget;
  const Formula n = normalize(parse_formula(text, Logic::WS1S));
  return tracks.empty() ? compile(n, budget) : compile(n, tracks, budget);
}

Word track_word(const std::vector<std::string>& rows) {
  Word w(rows.front().size(), 0);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t i = 0; i < rows[t].size(); ++i) {
      if (rows[t][i] == '1') w[i] |= Symbol{1} << t;
    }
  }
  return w;
}

std::vector<Word> all_words(std::size_t nsym, std::size_t max_len) {
  std::vector<Word> out{{}};
  std::vector<Word> layer{{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    for (const auto& w : layer) {
      for (Symbol s = 0; s < nsym; ++s) {
        Word u = w;
        u.push_back(s);
        next.push_back(std::move(u));
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

bool well_formed(const Word& w, const Tracks& tracks) {
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    if (is_second_order(tracks[t])) continue;
    int ones = 0;
    for (Symbol s : w) ones += bit(s, t);
    if (ones != 1) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("membership and order atoms") {
  const auto in = atom_automaton(Formula::in(Term::variable("x"), "X"));
  REQUIRE(in.tracks() == Tracks{"X", "x"});
  CHECK(in.accepts_word(track_word({"011", "010"})));   // x=1, X={1,2}
  CHECK_FALSE(in.accepts_word(track_word({"001", "010"})));
  CHECK(accepts(in, Valuation{{{"x", 5}}, {{"X", {1, 5}}}}));

  const auto lt = atom_automaton(Formula::lt(Term::variable("x"), Term::variable("y")));
  CHECK_FALSE(accepts(lt, Valuation{{{"x", 2}, {"y", 1}}, {}}));
  CHECK(accepts(lt, Valuation{{{"x", 1}, {"y", 2}}, {}}));
}

TEST_CASE("successor language on short words") {
  // all two-track words of length 4, compared with the relation y = x + 1
  const auto succ = atom_automaton(Formula::succ("x", "y"));
  REQUIRE(succ.tracks() == Tracks{"x", "y"});
  int accepted = 0;
  for (Symbol code = 0; code < 256; ++code) {
    Word w(4, 0);
    for (int i = 0; i < 4; ++i) w[i] = (code >> (2 * i)) & 3U;
    std::optional<int> x, y;
    bool ok = true;
    for (int i = 0; i < 4; ++i) {
      if (bit(w[i], 0)) ok = ok && !x, x = i;
      if (bit(w[i], 1)) ok = ok && !y, y = i;
    }
    const bool expected = ok && x && y && *y == *x + 1;
    CHECK(succ.accepts_word(w) == expected);
    accepted += expected;
  }
  CHECK(accepted == 3);  // x in {0,1,2}
}

TEST_CASE("products and complements match set operations on words") {
  testgen::FormulaGen gen(Logic::WS1S, 31);
  const testgen::Pool pool{{"x", "y"}, {"X"}};
  const Tracks tracks{"X", "x", "y"};
  const auto words = all_words(8, 6);
  for (int i = 0; i < 12; ++i) {
    Budget budget;
    const auto a = compile(normalize(gen.formula(3, pool)), tracks, budget);
    const auto b = compile(normalize(gen.formula(3, pool)), tracks, budget);
    const auto both = product(a, b, BoolOp::And, budget);
    const auto either = product(a, b, BoolOp::Or, budget);
    const auto not_a = complement(a, budget);
    int mismatches = 0;
    for (const auto& w : words) {
      mismatches += both.accepts_word(w) != (a.accepts_word(w) && b.accepts_word(w));
      mismatches += either.accepts_word(w) != (a.accepts_word(w) || b.accepts_word(w));
      mismatches += not_a.accepts_word(w) != (well_formed(w, tracks) && !a.accepts_word(w));
    }
    CHECK(mismatches == 0);
    CHECK(complement(not_a, budget) == a);
    CHECK(product(a, a, BoolOp::And, budget) == a);
    CHECK(is_empty(product(a, not_a, BoolOp::And, budget)));
  }
}

TEST_CASE("products of automata over different tracks") {
  Budget budget;
  const auto lt = atom_automaton(Formula::lt(Term::variable("x"), Term::variable("y")));
  const auto in = atom_automaton(Formula::in(Term::variable("y"), "X"));
  const auto either = product(lt, in, BoolOp::Or, budget);
  REQUIRE(either.tracks() == Tracks{"X", "x", "y"});
  CHECK(accepts(either, Valuation{{{"x", 4}, {"y", 2}}, {{"X", {2}}}}));
  CHECK(accepts(either, Valuation{{{"x", 1}, {"y", 2}}, {{"X", {}}}}));
  CHECK_FALSE(accepts(either, Valuation{{{"x", 4}, {"y", 2}}, {{"X", {3}}}}));
  // a word leaving x unset is rejected even though y in X holds
  CHECK_FALSE(either.accepts_word(track_word({"001", "000", "001"})));
}

TEST_CASE("complement of x < y") {
  Budget budget;
  const auto lt = atom_automaton(Formula::lt(Term::variable("x"), Term::variable("y")));
  const auto ge = compile_text("y < x | x = y");
  CHECK(complement(lt, budget) == ge);
  CHECK(complement(WordAutomaton::empty({}), budget) == WordAutomaton::universe({}));
}

TEST_CASE("projection") {
  Budget budget;
  CHECK(project_exists(atom_automaton(Formula::succ("x", "y")), "y", budget) == WordAutomaton::universe({"x"}));
  CHECK(compile_text("ex1 y: x < y") == WordAutomaton::universe({"x"}));
  CHECK(compile_text("ex1 x: x = 0 & x in X") == compile_text("0 in X"));
  // projecting a missing track changes nothing
  const auto lt = atom_automaton(Formula::lt(Term::variable("x"), Term::variable("y")));
  CHECK(project_exists(lt, "z", budget) == lt);
}

TEST_CASE("minimization is canonical") {
  const auto a = compile_text("x < y & y < z => x < z");
  CHECK(a == WordAutomaton::universe({"x", "y", "z"}));
  CHECK(compile_text("x <= y") == compile_text("~(y < x)"));
  CHECK(compile_text("ex1 z: x < z & z < y") == compile_text("x + 1 < y"));
  CHECK(compile_text("x = 3") == compile_text("x = 1 + 1 + 1"));
  CHECK(minimize(a) == a);
  // a single sink
  const WordAutomaton sink({"x"}, 0, {false, false}, {1, 1, 1, 1});
  CHECK(minimize(sink).num_states() == 1);
}

TEST_CASE("recurrence sentences of small rules") {
  const Tracks xy{"x", "y"};
  const auto ex2 = compile_text("(3 < x & y < x) | (x < 4 & y = x + 1)", xy);
  CHECK(accepts(ex2, Valuation{{{"x", 4}, {"y", 3}}, {}}));
  CHECK(accepts(ex2, Valuation{{{"x", 3}, {"y", 4}}, {}}));
  CHECK_FALSE(accepts(ex2, Valuation{{{"x", 3}, {"y", 2}}, {}}));
  CHECK(padding_closed(ex2));

  const auto phi1 = compile_text(
      "ex2 X: (ex1 x: x in X) & all1 x: ex1 y: (x in X => ((3 < x & x < 10 & y < x) | (x < 3 & y = x + 1)) & y in X)");
  CHECK(is_empty(phi1));
  const auto phi2 = compile_text(
      "ex2 X: (ex1 x: x in X) & all1 x: ex1 y: (x in X => ((3 < x & y < x) | (x < 4 & y = x + 1)) & y in X)");
  CHECK_FALSE(is_empty(phi2));
  const auto phi4 = compile_text("ex2 X: (ex1 x: x in X) & all1 x: ex1 y: (x in X => y < x & y in X)");
  CHECK(is_empty(phi4));
}

TEST_CASE("witnesses and encodings") {
  CHECK(is_empty(WordAutomaton::empty({"x"})));
  CHECK_FALSE(shortest_witness(WordAutomaton::empty({})).has_value());
  CHECK(shortest_witness(WordAutomaton::universe({})) == Word{});
  CHECK(shortest_witness(WordAutomaton::universe({"X"})) == Word{});

  CHECK(decode_witness(track_word({"001"}), {"x"}).first_order.at("x") == 2);
  CHECK_THROWS_AS(decode_witness(track_word({"011"}), {"x"}), std::invalid_argument);
  CHECK_THROWS_AS(decode_witness(track_word({"000"}), {"x"}), std::invalid_argument);

  const Valuation v{{{"x", 3}}, {{"X", {0, 6}}}};
  CHECK(decode_witness(encode(v, {"X", "x"}), {"X", "x"}) == v);
  CHECK(encode(v, {"X", "x"}).size() == 7);

  // shortest, then least: x = 2 < y
  const auto w = shortest_witness(compile_text("1 < x & x < y", {"x", "y"}));
  REQUIRE(w);
  CHECK(decode_witness(*w, {"x", "y"}) == Valuation{{{"x", 2}, {"y", 3}}, {}});
}

TEST_CASE("resource limits") {
  Budget tight(Limits{4, 16});
  CHECK_THROWS_AS(compile(normalize(parse_formula("x = 9", Logic::WS1S)), tight), ResourceExceeded);
  Budget narrow(Limits{1000, 2});
  CHECK_THROWS_AS(compile(normalize(parse_formula("x < y & y in X", Logic::WS1S)), narrow), ResourceExceeded);
}
