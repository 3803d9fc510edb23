#include "wsloop/report.hpp"

#include <cmath>
#include <stdexcept>

namespace wsloop {

Report make_report(const Rule& r, const Verdict& v) {
  Report out;
  out.rule = r.name;
  out.logic = to_string(r.logic);
  out.verdict = to_string(v.kind);
  if (v.kind == VerdictKind::Loops) {
    std::vector<std::string> w;
    for (const auto& p : v.witness) w.push_back(format_position(p));
    out.witness = std::move(w);
  }
  if (v.reason) out.reason = to_string(*v.reason);
  if (!v.via.empty()) out.via = v.via;
  out.peak_states = v.peak_states;
  out.millis = static_cast<std::int64_t>(std::llround(v.millis));
  return out;
}

nlohmann::json to_json(const Report& r) {
  nlohmann::json j;
  j["rule"] = r.rule;
  j["logic"] = r.logic;
  j["verdict"] = r.verdict;
  if (r.witness) j["witness"] = *r.witness;
  if (r.reason) j["reason"] = *r.reason;
  if (r.via) j["via"] = *r.via;
  if (r.oracle) j["oracle"] = *r.oracle;
  j["stats"] = {{"peak_states", r.peak_states}, {"millis", r.millis}};
  return j;
}

Report report_from_json(const nlohmann::json& j) {
  try {
    Report r;
    r.rule = j.at("rule").get<std::string>();
    r.logic = j.at("logic").get<std::string>();
    if (r.logic != "ws1s" && r.logic != "ws2s") throw std::invalid_argument("bad logic '" + r.logic + "'");
    r.verdict = j.at("verdict").get<std::string>();
    if (r.verdict != "loops" && r.verdict != "terminates" && r.verdict != "unknown") {
      throw std::invalid_argument("bad verdict '" + r.verdict + "'");
    }
    if (j.contains("witness")) r.witness = j["witness"].get<std::vector<std::string>>();
    if (j.contains("reason")) r.reason = j["reason"].get<std::string>();
    if (j.contains("via")) r.via = j["via"].get<std::string>();
    if (j.contains("oracle")) r.oracle = j["oracle"].get<std::string>();
    r.peak_states = j.at("stats").at("peak_states").get<std::size_t>();
    r.millis = j.at("stats").at("millis").get<std::int64_t>();
    if (r.witness.has_value() != (r.verdict == "loops")) throw std::invalid_argument("witness present iff loops");
    if (r.reason.has_value() != (r.verdict == "unknown")) throw std::invalid_argument("reason present iff unknown");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
}

int exit_code(VerdictKind k) {
  switch (k) {
    case VerdictKind::Loops: return 0;
    case VerdictKind::Terminates: return 1;
    case VerdictKind::Unknown: return 2;
  }
  return 3;
}

}  // namespace wsloop
