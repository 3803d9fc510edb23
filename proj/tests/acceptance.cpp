// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.  Not registered with ctest; run ./build/acceptance.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "support/examples.hpp"
#include "support/generators.hpp"
#include "wsloop/normalize.hpp"
#include "wsloop/oracle.hpp"

using namespace wsloop;
using testgen::example;
using testgen::set1;
using testgen::set2;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) note << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// -- 1 ------------------------------------------------------------------------

void golden(Outcome& o) {
  struct Case {
    const char* name;
    VerdictKind kind;
    const char* witness;
    double seconds;
  };
  const Case cases[] = {
      {"ex1", VerdictKind::Terminates, nullptr, 10}, {"ex2", VerdictKind::Loops, "3,4", 10},
      {"ex3", VerdictKind::Unknown, nullptr, 10},    {"ex4", VerdictKind::Unknown, nullptr, 10},
      {"ex5", VerdictKind::Loops, "0", 60},          {"ex6", VerdictKind::Loops, "e,1", 10},
      {"ex7", VerdictKind::Loops, nullptr, 10},      {"ex8", VerdictKind::Unknown, nullptr, 10},
      {"ex9", VerdictKind::Loops, "e", 60},
  };
  double slowest = 0;
  for (const auto& c : cases) {
    const Rule r = example(c.name);
    const auto t0 = std::chrono::steady_clock::now();
    const Verdict v = decide(r);
    const double took = seconds_since(t0);
    slowest = std::max(slowest, took);
    o.require(v.kind == c.kind, std::string(c.name) + " verdict " + to_string(v.kind));
    o.require(took < c.seconds, std::string(c.name) + " too slow");
    if (c.kind == VerdictKind::Unknown) {
      o.require(v.reason == UnknownReason::InfiniteStartSetNoFiniteRecurrence, std::string(c.name) + " reason");
    }
    Budget budget;
    if (c.witness) {
      const PositionSet expected = parse_position_set(c.witness, r.logic);
      o.require(v.witness == expected, std::string(c.name) + " witness {" + format_position_set(v.witness) + "}");
      o.require(check_recurrence_set(r, expected, budget), std::string(c.name) + " witness does not verify");
    }
  }
  Budget budget;
  o.require(!check_closed_recurrence_set(example("ex6"), set2("e,1"), budget), "ex6 {e,1} closed");
  o.require(check_closed_recurrence_set(example("ex6_prime"), set2("e,1"), budget), "ex6' {e,1} not closed");
  o.require(check_closed_recurrence_set(example("ex7"), set2("11,000,001,011"), budget), "ex7 set not closed");
  o.note << "9 rules, slowest " << static_cast<int>(slowest * 1000) << " ms";
}

// -- 2 ------------------------------------------------------------------------

void engine_oracle(Outcome& o) {
  std::size_t disagreements = 0, checks = 0;
  for (const auto& [logic, count, depth, seed] :
       {std::tuple{Logic::WS1S, 500, 5, 0xacce1ULL}, std::tuple{Logic::WS2S, 200, 4, 0xacce2ULL}}) {
    testgen::FormulaGen gen(logic, seed);
    const auto bound = testgen::exact_bound(logic);
    for (int i = 0; i < count; ++i) {
      const Formula f = gen.formula(depth, gen.pool());
      Budget budget;
      const CompiledFormula c(f, logic, budget);
      for (const auto& v : testgen::valuations(logic, c.tracks(), 256, gen.rng())) {
        ++checks;
        if (c.holds(v) != oracle::eval_bounded(f, logic, v, bound)) {
          o.require(false, pretty_print(f, logic));
          ++disagreements;
        }
      }
    }
  }
  o.note << "700 formulas, " << checks << " valuations, " << disagreements << " disagreements";
}

// -- 3 ------------------------------------------------------------------------

std::vector<ws1s::Word> all_words(std::size_t nsym, std::size_t max_len) {
  std::vector<ws1s::Word> out{{}}, layer{{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<ws1s::Word> next;
    for (const auto& w : layer) {
      for (Symbol s = 0; s < nsym; ++s) {
        auto u = w;
        u.push_back(s);
        next.push_back(std::move(u));
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

std::vector<ws2s::LabeledTree> all_trees(std::size_t nsym, std::size_t depth) {
  std::function<std::vector<ws2s::LabeledTree>(const ws2s::Path&)> grow = [&](const ws2s::Path& at) {
    std::vector<ws2s::LabeledTree> out{ws2s::LabeledTree{}};
    if (at.size() >= depth) return out;
    const auto lefts = grow(at + '0');
    const auto rights = grow(at + '1');
    for (Symbol s = 0; s < nsym; ++s) {
      for (const auto& l : lefts) {
        for (const auto& r : rights) {
          ws2s::LabeledTree t;
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

template <class Label>
bool singletons(const Label& labels, const Tracks& tracks) {
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    if (is_second_order(tracks[i])) continue;
    int ones = 0;
    for (const auto& item : labels) {
      if constexpr (std::is_same_v<std::decay_t<decltype(item)>, Symbol>) ones += bit(item, i);
      else ones += bit(item.second, i);
    }
    if (ones != 1) return false;
  }
  return true;
}

void algebra(Outcome& o) {
  std::size_t mismatches = 0, pairs = 0;
  {
    testgen::FormulaGen gen(Logic::WS1S, 0xa1);
    const testgen::Pool pool{{"x", "y"}, {"X"}};
    const Tracks tracks{"X", "x", "y"};
    const auto words = all_words(8, 6);
    for (int i = 0; i < 15; ++i, ++pairs) {
      Budget budget;
      const auto a = ws1s::compile(normalize(gen.formula(3, pool)), tracks, budget);
      const auto b = ws1s::compile(normalize(gen.formula(3, pool)), tracks, budget);
      const auto both = ws1s::product(a, b, BoolOp::And, budget);
      const auto either = ws1s::product(a, b, BoolOp::Or, budget);
      const auto not_a = ws1s::complement(a, budget);
      for (const auto& w : words) {
        const bool in_a = a.accepts_word(w), in_b = b.accepts_word(w);
        mismatches += both.accepts_word(w) != (in_a && in_b);
        mismatches += either.accepts_word(w) != (in_a || in_b);
        mismatches += not_a.accepts_word(w) != (singletons(w, tracks) && !in_a);
      }
      o.require(ws1s::complement(not_a, budget) == a, "word complement involution");
      o.require(ws1s::padding_closed(a) && ws1s::padding_closed(both), "word padding closure");
      o.require(ws1s::minimize(either) == either, "word minimization fixpoint");
    }
  }
  {
    testgen::FormulaGen gen(Logic::WS2S, 0xa2);
    const testgen::Pool pool{{"x"}, {"X"}};
    const Tracks tracks{"X", "x"};
    const auto trees = all_trees(4, 3);
    for (int i = 0; i < 15; ++i, ++pairs) {
      Budget budget;
      const auto a = ws2s::compile(normalize(gen.formula(3, pool)), tracks, budget);
      const auto b = ws2s::compile(normalize(gen.formula(3, pool)), tracks, budget);
      const auto both = ws2s::product(a, b, BoolOp::And, budget);
      const auto either = ws2s::product(a, b, BoolOp::Or, budget);
      const auto not_a = ws2s::complement(a, budget);
      for (const auto& t : trees) {
        const bool in_a = ws2s::accepts_tree(a, t), in_b = ws2s::accepts_tree(b, t);
        mismatches += ws2s::accepts_tree(both, t) != (in_a && in_b);
        mismatches += ws2s::accepts_tree(either, t) != (in_a || in_b);
        mismatches += ws2s::accepts_tree(not_a, t) != (singletons(t.labels, tracks) && !in_a);
      }
      o.require(ws2s::complement(not_a, budget) == a, "tree complement involution");
      o.require(ws2s::padding_closed(a) && ws2s::padding_closed(both), "tree padding closure");
      o.require(ws2s::minimize(either) == either, "tree minimization fixpoint");
    }
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " language mismatches");

  // equivalent variants compile to identical automata
  const std::pair<const char*, const char*> same1[] = {
      {"x <= y", "~(y < x)"}, {"ex1 z: x < z & z < y", "x + 1 < y"}, {"x = 3", "x = 1 + 1 + 1"},
      {"x < y & y < z => x < z", "x = x & y = y & z = z"}, {"~(x in X & y in X)", "~x in X | ~y in X"}};
  const std::pair<const char*, const char*> same2[] = {
      {"y = x.01", "ex1 z: z = x.0 & y = z.1"}, {"x <= y", "x < y | x = y"},
      {"ex1 y: y = x.1", "x = x"}, {"all1 z: z < x => z in X", "~ex1 z: z < x & ~z in X"}};
  for (const auto& [l, r] : same1) {
    Budget b;
    const auto a = ws1s::compile(normalize(parse_formula(l, Logic::WS1S)), b);
    o.require(a == ws1s::compile(normalize(parse_formula(r, Logic::WS1S)), b), std::string("variants ") + l);
  }
  for (const auto& [l, r] : same2) {
    Budget b;
    const auto a = ws2s::compile(normalize(parse_formula(l, Logic::WS2S)), b);
    o.require(a == ws2s::compile(normalize(parse_formula(r, Logic::WS2S)), b), std::string("variants ") + l);
  }
  o.note << pairs << " formula pairs, words of length <= 6, trees of depth <= 3, " << mismatches << " mismatches";
}

// -- 4 ------------------------------------------------------------------------

std::vector<Rule> generated_rules(Logic logic, int count, std::uint64_t seed) {
  testgen::FormulaGen gen(logic, seed);
  const testgen::Pool pool{{"x", "y"}, {"X"}};
  std::vector<Rule> out;
  while (static_cast<int>(out.size()) < count) {
    const Formula f = gen.formula(logic == Logic::WS1S ? 5 : 4, pool);
    if (free_vars(f).second_order.empty()) out.push_back(Rule{"g", logic, f});
  }
  return out;
}

void runs(Outcome& o) {
  std::vector<Rule> rules;
  for (const char* name : {"ex1", "ex2", "ex3", "ex4", "ex5", "ex6", "ex6_prime", "ex7", "ex8", "ex9"}) {
    rules.push_back(example(name));
  }
  for (const auto& r : generated_rules(Logic::WS1S, 150, 0x4a)) rules.push_back(r);
  for (const auto& r : generated_rules(Logic::WS2S, 60, 0x4b)) rules.push_back(r);

  int loops = 0;
  for (const Rule& r : rules) {
    const Verdict v = decide(r);
    if (v.kind != VerdictKind::Loops) continue;
    ++loops;
    oracle::SimulateOptions options;
    options.within = v.witness;
    const auto trace = oracle::simulate(r, *v.witness.begin(), 100, options);
    o.require(trace.positions.size() == 101, "trace of " + pretty_print(r.body, r.logic) + " ended early");
    Budget budget;
    const SuccessorView succ(r, budget);
    for (std::size_t i = 0; i + 1 < trace.positions.size(); ++i) {
      o.require(succ.is_successor(trace.positions[i], trace.positions[i + 1]), "bad edge");
      o.require(v.witness.count(trace.positions[i + 1]) == 1, "trace left the witness");
    }
  }
  o.note << loops << " looping rules of " << rules.size() << ", 100-step traces";
}

// -- 5 ------------------------------------------------------------------------

void consistency(Outcome& o) {
  std::vector<Rule> rules;
  for (const char* name : {"ex1", "ex2", "ex3", "ex4", "ex5", "ex6", "ex6_prime", "ex7", "ex8", "ex9"}) {
    rules.push_back(example(name));
  }
  for (const auto& r : generated_rules(Logic::WS1S, 60, 0x5a)) rules.push_back(r);
  for (const auto& r : generated_rules(Logic::WS2S, 30, 0x5b)) rules.push_back(r);

  std::size_t pairs = 0, closed = 0;
  for (const Rule& r : rules) {
    // every subset of a small domain
    const auto dom = oracle::domain(r.logic, r.logic == Logic::WS1S ? 5 : 2);
    for (std::uint32_t mask = 0; mask < (1U << dom.size()); ++mask) {
      PositionSet x;
      for (std::size_t i = 0; i < dom.size(); ++i) {
        if (mask >> i & 1U) x.insert(dom[i]);
      }
      Budget budget;
      ++pairs;
      if (check_closed_recurrence_set(r, x, budget)) {
        ++closed;
        o.require(check_recurrence_set(r, x, budget), "closed but not a recurrence set: " + format_position_set(x));
      }
    }
  }
  Budget budget;
  o.require(check_refinement(example("ex6"), example("ex6_prime"), set2("e,1"), set2("e,1"), budget),
            "refinement triple rejected");
  o.note << pairs << " (rule, set) pairs, " << closed << " closed";
}

// -- 6 ------------------------------------------------------------------------

std::pair<int, std::string> run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + WSLOOP_CLI + "\" " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[512];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

void resource_limits(Outcome& o) {
  const auto [code, out] = run_cli("decide --json --max-states 100 \"" + testgen::example_path("ex5") + "\"");
  std::string verdict = "?";
  try {
    const auto j = nlohmann::json::parse(out);
    verdict = j.at("verdict").get<std::string>();
    if (j.contains("reason")) verdict += "(" + j["reason"].get<std::string>() + ")";
  } catch (const std::exception&) {
  }
  o.require(code == 2 && verdict == "unknown(ResourceExceeded)", "cap 100 gives " + verdict);

  // what does hold: no cap ever produces a wrong verdict, and small caps do
  // end in ResourceExceeded
  const Rule r = example("ex5");
  const Verdict full = decide(r);
  std::size_t wrong = 0, largest_exceeded = 0;
  for (std::size_t cap = 1; cap <= 100; ++cap) {
    const Verdict v = decide(r, Limits{cap, 16});
    if (v.kind == VerdictKind::Unknown && v.reason == UnknownReason::ResourceExceeded) {
      largest_exceeded = cap;
    } else if (v.kind != full.kind || v.witness != full.witness) {
      ++wrong;
    }
  }
  o.note << "exit " << code << ", verdict " << verdict << "; peak " << full.peak_states
         << " states so the cap is never reached; caps 1.." << largest_exceeded
         << " give ResourceExceeded, wrong verdicts over caps 1..100: " << wrong;
}

}  // namespace

int main() {
  const std::pair<const char*, void (*)(Outcome&)> criteria[] = {
      {"golden examples", golden},
      {"engine/oracle equivalence", engine_oracle},
      {"automata algebra", algebra},
      {"looping runs inside witnesses", runs},
      {"closed implies recurrence, refinement", consistency},
      {"resource limits", resource_limits},
  };
  int failed = 0;
  int index = 1;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << ' ' << index++ << ' ' << name << ": " << o.note.str() << std::endl;
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
