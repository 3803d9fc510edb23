#pragma once

// Machine-readable verdict reports:
//
//   { "rule": str, "logic": "ws1s"|"ws2s",
//     "verdict": "loops"|"terminates"|"unknown",
//     "witness": [str]?, "reason": str?, "via": str?, "oracle": str?,
//     "stats": { "peak_states": int, "millis": int } }

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wsloop/analyzer.hpp"

namespace wsloop {

struct Report {
  std::string rule;
  std::string logic;
  std::string verdict;
  std::optional<std::vector<std::string>> witness;
  std::optional<std::string> reason;
  std::optional<std::string> via;
  /// "agree" or "disagree" when an oracle cross-check ran.
  std::optional<std::string> oracle;
  std::size_t peak_states = 0;
  std::int64_t millis = 0;

  friend bool operator==(const Report&, const Report&) = default;
};

Report make_report(const Rule& r, const Verdict& v);

nlohmann::json to_json(const Report& r);
/// Throws std::invalid_argument when `j` does not follow the schema.
Report report_from_json(const nlohmann::json& j);

/// Exit status of the decide command: 0 loops, 1 terminates, 2 unknown.
int exit_code(VerdictKind k);

}  // namespace wsloop
