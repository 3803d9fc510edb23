#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wsloop/analyzer.hpp"
#include "wsloop/dot.hpp"
#include "wsloop/oracle.hpp"
#include "wsloop/report.hpp"

namespace py = pybind11;
using namespace wsloop;

namespace {

std::optional<Logic> logic_arg(const std::optional<std::string>& name) {
  if (!name) return std::nullopt;
  if (*name == "ws1s") return Logic::WS1S;
  if (*name == "ws2s") return Logic::WS2S;
  throw py::value_error("logic must be 'ws1s' or 'ws2s'");
}

PositionSet set_arg(const std::vector<std::string>& items, Logic logic) {
  PositionSet out;
  for (const auto& s : items) out.insert(parse_position(s, logic));
  return out;
}

std::vector<std::string> strings(const PositionSet& s) {
  std::vector<std::string> out;
  for (const auto& p : s) out.push_back(format_position(p));
  return out;
}

py::object report_dict(const Rule& r, const Verdict& v) {
  return py::module_::import("json").attr("loads")(to_json(make_report(r, v)).dump());
}

}  // namespace

PYBIND11_MODULE(_wsloop, m) {
  m.doc() = "Termination analysis of monadic WS1S/WS2S rules";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ResourceExceeded>(m, "ResourceExceeded", PyExc_RuntimeError);

  py::class_<Rule>(m, "Rule")
      .def_readonly("name", &Rule::name)
      .def_property_readonly("logic", [](const Rule& r) { return std::string(to_string(r.logic)); })
      .def_property_readonly("body", [](const Rule& r) { return pretty_print(r.body, r.logic); })
      .def("__repr__", [](const Rule& r) {
        return "<Rule " + r.name + " (" + to_string(r.logic) + "): " + pretty_print(r.body, r.logic) + ">";
      });

  m.def(
      "parse_rule", [](const std::string& text, std::optional<std::string> logic) { return parse_rule(text, logic_arg(logic)); },
      py::arg("text"), py::arg("logic") = py::none(), "Parse the contents of a rule file.");

  m.def(
      "decide",
      [](const Rule& r, std::size_t max_states) {
        Limits limits;
        limits.max_states = max_states;
        Verdict v;
        {
          py::gil_scoped_release release;
          v = decide(r, limits);
        }
        return report_dict(r, v);
      },
      py::arg("rule"), py::arg("max_states") = Limits{}.max_states,
      "Decide a rule; returns the JSON report as a dict.");

  m.def(
      "check",
      [](const Rule& r, const std::vector<std::string>& x, bool closed) {
        Budget budget;
        const PositionSet s = set_arg(x, r.logic);
        return closed ? check_closed_recurrence_set(r, s, budget) : check_recurrence_set(r, s, budget);
      },
      py::arg("rule"), py::arg("positions"), py::arg("closed") = false);

  m.def(
      "check_refinement",
      [](const Rule& r, const Rule& r2, const std::vector<std::string>& x, const std::vector<std::string>& x2) {
        Budget budget;
        return check_refinement(r, r2, set_arg(x, r.logic), set_arg(x2, r2.logic), budget);
      },
      py::arg("rule"), py::arg("refined"), py::arg("positions"), py::arg("refined_positions"));

  m.def("finite_start", [](const Rule& r) {
    Budget budget;
    return finite_start_check(r, budget);
  });

  m.def(
      "simulate",
      [](const Rule& r, const std::string& start, std::size_t steps, std::optional<std::vector<std::string>> within,
         std::uint32_t horizon) {
        oracle::SimulateOptions options;
        if (within) options.within = set_arg(*within, r.logic);
        options.horizon = horizon;
        const auto t = oracle::simulate(r, parse_position(start, r.logic), steps, options);
        std::vector<std::string> positions;
        for (const auto& p : t.positions) positions.push_back(format_position(p));
        return py::make_tuple(positions, oracle::to_string(t.end));
      },
      py::arg("rule"), py::arg("start"), py::arg("steps") = 100, py::arg("within") = py::none(),
      py::arg("horizon") = 0, "Least-successor trace; returns (positions, end).");

  m.def(
      "search",
      [](const Rule& r, std::uint32_t first_order, std::uint32_t second_order) -> std::optional<std::vector<std::string>> {
        const auto found = oracle::search_recurrence_sets(r, {first_order, second_order});
        if (!found) return std::nullopt;
        return strings(*found);
      },
      py::arg("rule"), py::arg("bound") = 12, py::arg("set_bound") = 8,
      "Exhaustive search for the smallest recurrence set in a bounded domain.");

  m.def(
      "dot",
      [](const Rule& r, const std::string& stage) {
        Formula f = r.body;
        if (stage == "phi_r") f = build_phi_r(r);
        else if (stage == "phi_prime") f = build_phi_prime_r(r);
        else if (stage == "recurrence") f = recurrence_body(r);
        else if (stage != "atom") throw py::value_error("stage must be atom, phi_r, phi_prime or recurrence");
        Budget budget;
        const CompiledFormula c(f, r.logic, budget);
        const std::string title = r.name + ":" + stage;
        return c.word() ? to_dot(*c.word(), title) : to_dot(*c.tree(), title);
      },
      py::arg("rule"), py::arg("stage") = "atom");
}
