// wsloop: decide termination of monadic rules x -> psi(x,y), y.
//
// Exit status of `decide`: 0 loops, 1 terminates, 2 unknown, 64 for
// unreadable input, 3 for internal errors.  `check` exits 0 when the set
// passes and 1 when it does not.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "wsloop/analyzer.hpp"
#include "wsloop/dot.hpp"
#include "wsloop/normalize.hpp"
#include "wsloop/oracle.hpp"
#include "wsloop/parser.hpp"
#include "wsloop/report.hpp"

namespace {

using namespace wsloop;

constexpr int kUsage = 64;
constexpr int kInternal = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<Logic> logic_flag(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "ws1s") return Logic::WS1S;
  if (s == "ws2s") return Logic::WS2S;
  throw UsageError("--logic must be ws1s or ws2s, not '" + s + "'");
}

Rule load_rule(const std::string& path, std::optional<Logic> logic) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_rule(ss.str(), logic);
  } catch (const ParseError& e) {
    throw UsageError(path + ":" + e.what());
  }
}

PositionSet set_flag(const std::string& text, Logic logic, const char* flag) {
  try {
    return parse_position_set(text, logic);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

// Cross-check of a verdict against exhaustive search on a small domain.
// The oracle's candidate is re-verified exactly, so bounded evaluation of
// quantified psi cannot produce a false alarm in that direction.
bool oracle_agrees(const Rule& r, const Verdict& v) {
  oracle::Bound b;
  if (r.logic == Logic::WS1S) b = {12, 8};
  else b = {4, 3};
  const auto found = oracle::search_recurrence_sets(r, b);
  Budget budget;
  const bool real = found && check_recurrence_set(r, *found, budget);
  if (v.kind == VerdictKind::Loops) {
    const auto dom = oracle::domain(r.logic, b.first_order);
    const bool inside = std::all_of(v.witness.begin(), v.witness.end(),
                                    [&](const Position& p) { return std::find(dom.begin(), dom.end(), p) != dom.end(); });
    return !inside || found.has_value();
  }
  if (v.kind == VerdictKind::Unknown && v.reason == UnknownReason::ResourceExceeded) return true;
  return !real;
}

struct DecideOptions {
  std::vector<std::string> files;
  std::string logic;
  std::size_t max_states = Limits{}.max_states;
  bool oracle_check = false;
  bool json = false;
  unsigned jobs = 1;
};

struct Outcome {
  std::string text;
  nlohmann::json json;
  int code = 0;
};

Outcome decide_one(const std::string& path, const DecideOptions& o) {
  Outcome out;
  Rule r = load_rule(path, logic_flag(o.logic));
  Limits limits;
  limits.max_states = o.max_states;
  const Verdict v = decide(r, limits);
  Report rep = make_report(r, v);
  out.code = exit_code(v.kind);
  if (o.oracle_check) {
    const bool ok = oracle_agrees(r, v);
    rep.oracle = ok ? "agree" : "disagree";
    if (!ok) out.code = kInternal;
  }
  out.json = to_json(rep);
  std::ostringstream os;
  os << r.name << " (" << to_string(r.logic) << "): " << to_string(v.kind) << '\n';
  if (v.kind == VerdictKind::Loops) os << "  witness: {" << format_position_set(v.witness) << "}\n";
  if (v.reason) os << "  reason: " << to_string(*v.reason) << '\n';
  if (!v.via.empty()) os << "  via: " << v.via << '\n';
  if (!v.detail.empty()) os << "  detail: " << v.detail << '\n';
  if (rep.oracle) os << "  oracle: " << *rep.oracle << '\n';
  os << "  peak states: " << v.peak_states << ", time: " << rep.millis << " ms\n";
  out.text = os.str();
  return out;
}

int cmd_decide(const DecideOptions& o) {
  std::vector<Outcome> results(o.files.size());
  std::vector<std::string> errors(o.files.size());
  std::vector<int> error_codes(o.files.size(), 0);
  auto work = [&](std::size_t i) {
    try {
      results[i] = decide_one(o.files[i], o);
    } catch (const UsageError& e) {
      errors[i] = e.what();
      error_codes[i] = kUsage;
    } catch (const std::exception& e) {
      errors[i] = o.files[i] + ": " + e.what();
      error_codes[i] = kInternal;
    }
  };
  const unsigned jobs = std::max(1U, std::min<unsigned>(o.jobs, static_cast<unsigned>(o.files.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < o.files.size(); i += jobs) work(i);
    });
  }
  for (auto& th : pool) th.join();

  int code = 0;
  nlohmann::json all = nlohmann::json::array();
  for (std::size_t i = 0; i < o.files.size(); ++i) {
    if (error_codes[i]) {
      std::cerr << "wsloop: " << errors[i] << '\n';
      code = std::max(code, error_codes[i]);
      continue;
    }
    code = std::max(code, results[i].code);
    if (o.json) all.push_back(results[i].json);
    else std::cout << results[i].text;
  }
  if (o.json) std::cout << (o.files.size() == 1 && !all.empty() ? all[0] : all).dump(2) << '\n';
  return code;
}

int cmd_check(const std::string& path, const std::string& logic, const std::string& set, bool closed,
              const std::string& path2, const std::string& set2) {
  const Rule r = load_rule(path, logic_flag(logic));
  const PositionSet x = set_flag(set, r.logic, "--set");
  Budget budget;
  bool ok = false;
  std::string what;
  if (!path2.empty()) {
    const Rule r2 = load_rule(path2, logic_flag(logic));
    const PositionSet x2 = set_flag(set2, r2.logic, "--set2");
    ok = check_refinement(r, r2, x, x2, budget);
    what = "refinement of " + r.name + " by " + r2.name;
  } else if (closed) {
    ok = check_closed_recurrence_set(r, x, budget);
    what = "closed recurrence set of " + r.name;
  } else {
    ok = check_recurrence_set(r, x, budget);
    what = "recurrence set of " + r.name;
  }
  std::cout << '{' << format_position_set(x) << "} " << (ok ? "is" : "is not") << " a " << what << '\n';
  return ok ? 0 : 1;
}

int cmd_simulate(const std::string& path, const std::string& logic, const std::string& start, std::size_t steps,
                 const std::string& within, std::uint32_t horizon) {
  const Rule r = load_rule(path, logic_flag(logic));
  Position p = Position::natural(0);
  try {
    p = parse_position(start, r.logic);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--start: ") + e.what());
  }
  oracle::SimulateOptions opts;
  if (!within.empty()) opts.within = set_flag(within, r.logic, "--within");
  opts.horizon = horizon;
  const oracle::Trace t = oracle::simulate(r, p, steps, opts);
  for (std::size_t i = 0; i < t.positions.size(); ++i) {
    std::cout << i << ": " << format_position(t.positions[i]) << '\n';
  }
  std::cout << "end: " << oracle::to_string(t.end) << " after " << t.positions.size() - 1 << " steps\n";
  return 0;
}

int cmd_dump(const std::string& path, const std::string& logic, const std::string& stage, const std::string& dot) {
  const Rule r = load_rule(path, logic_flag(logic));
  Formula f = r.body;
  if (stage == "phi_r") f = build_phi_r(r);
  else if (stage == "phi_prime") f = build_phi_prime_r(r);
  else if (stage == "recurrence") f = recurrence_body(r);
  else if (stage != "atom") throw UsageError("--stage must be atom, phi_r, phi_prime or recurrence");
  Budget budget;
  const CompiledFormula c(f, r.logic, budget);
  const std::string title = r.name + ":" + stage;
  const std::string text = c.word() ? to_dot(*c.word(), title) : to_dot(*c.tree(), title);
  if (dot.empty() || dot == "-") {
    std::cout << text;
  } else {
    std::ofstream out(dot);
    if (!out) throw std::runtime_error("cannot write " + dot);
    out << text;
    std::cerr << "wrote " << dot << " (" << c.num_states() << " states)\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decide termination of monadic rules with WS1S/WS2S automata"};
  app.require_subcommand(1);

  DecideOptions dec;
  auto* decide_cmd = app.add_subcommand("decide", "Search for a finite recurrence set, else try to prove termination");
  decide_cmd->add_option("files", dec.files, "Rule files")->required();
  decide_cmd->add_option("--logic", dec.logic, "Override the rule file's logic (ws1s|ws2s)");
  decide_cmd->add_option("--max-states", dec.max_states, "Largest intermediate automaton before giving up");
  decide_cmd->add_flag("--oracle-check", dec.oracle_check, "Cross-check with exhaustive search on a small domain");
  decide_cmd->add_flag("--json", dec.json, "Print a JSON report");
  decide_cmd->add_option("--jobs", dec.jobs, "Decide several files in parallel");

  std::string logic, rule_path, set, rule2, set2, start, within, stage = "phi_r", dot;
  bool closed = false;
  std::size_t steps = 20;
  std::uint32_t horizon = 0;

  auto* check_cmd = app.add_subcommand("check", "Check a candidate (closed) recurrence set");
  check_cmd->add_option("file", rule_path, "Rule file")->required();
  check_cmd->add_option("--logic", logic);
  check_cmd->add_option("--set", set, "Positions, e.g. 3,4 or e,1")->required();
  check_cmd->add_flag("--closed", closed, "Also require every successor to stay in the set");
  check_cmd->add_option("--rule2", rule2, "Refined rule; checks the refinement triple");
  check_cmd->add_option("--set2", set2, "Closed recurrence set of the refined rule");

  auto* sim_cmd = app.add_subcommand("simulate", "Run the rule, always taking the least successor");
  sim_cmd->add_option("file", rule_path, "Rule file")->required();
  sim_cmd->add_option("--logic", logic);
  sim_cmd->add_option("--start", start, "Start position")->required();
  sim_cmd->add_option("--steps", steps, "Step limit");
  sim_cmd->add_option("--within", within, "Only take successors inside this set");
  sim_cmd->add_option("--horizon", horizon, "Largest successor searched (number, or path length)");

  auto* dump_cmd = app.add_subcommand("dump", "Write an automaton as Graphviz");
  dump_cmd->add_option("file", rule_path, "Rule file")->required();
  dump_cmd->add_option("--logic", logic);
  dump_cmd->add_option("--stage", stage, "atom | phi_r | phi_prime | recurrence");
  dump_cmd->add_option("--dot", dot, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*decide_cmd) return cmd_decide(dec);
    if (*check_cmd) {
      if (!rule2.empty() && set2.empty()) throw UsageError("--rule2 needs --set2");
      return cmd_check(rule_path, logic, set, closed, rule2, set2);
    }
    if (*sim_cmd) return cmd_simulate(rule_path, logic, start, steps, within, horizon);
    if (*dump_cmd) return cmd_dump(rule_path, logic, stage, dot);
  } catch (const UsageError& e) {
    std::cerr << "wsloop: " << e.what() << '\n';
    return kUsage;
  } catch (const ResourceExceeded& e) {
    std::cerr << "wsloop: resource limit: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "wsloop: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
