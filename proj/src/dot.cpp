#include "wsloop/dot.hpp"

#include <map>
#include <sstream>

namespace wsloop {

namespace {

void cover(const std::vector<bool>& members, std::size_t width, std::size_t fixed, Symbol prefix, std::string& pattern,
           std::vector<std::string>& out) {
  const std::size_t free_bits = width - fixed;
  bool any = false;
  bool all = true;
  for (Symbol rest = 0; rest < (Symbol{1} << free_bits); ++rest) {
    const bool m = members[prefix | (rest << fixed)];
    any = any || m;
    all = all && m;
  }
  if (!any) return;
  if (all) {
    out.push_back(pattern + std::string(free_bits, '*'));
    return;
  }
  for (char b : {'0', '1'}) {
    pattern.push_back(b);
    cover(members, width, fixed + 1, prefix | (static_cast<Symbol>(b == '1') << fixed), pattern, out);
    pattern.pop_back();
  }
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += sep;
    out += p;
  }
  return out;
}

std::string header(const std::string& title, const Tracks& tracks) {
  std::ostringstream os;
  os << "digraph \"" << title << "\" {\n";
  os << "  rankdir=LR;\n";
  os << "  label=\"tracks: " << (tracks.empty() ? "(none)" : join(tracks, " ")) << "\";\n";
  os << "  node [shape=circle];\n";
  return os.str();
}

}  // namespace

std::vector<std::string> symbol_cubes(const std::vector<bool>& members, std::size_t width) {
  std::vector<std::string> out;
  std::string pattern;
  cover(members, width, 0, 0, pattern, out);
  return out;
}

std::string to_dot(const ws1s::WordAutomaton& a, const std::string& title) {
  std::ostringstream os;
  os << header(title, a.tracks());
  os << "  init [shape=point];\n";
  for (State s = 0; s < a.num_states(); ++s) {
    os << "  s" << s << " [label=\"" << s << "\"" << (a.accepting(s) ? ", shape=doublecircle" : "") << "];\n";
  }
  os << "  init -> s" << a.initial() << ";\n";
  const std::size_t k = a.tracks().size();
  for (State s = 0; s < a.num_states(); ++s) {
    std::map<State, std::vector<bool>> by_target;
    for (Symbol c = 0; c < a.num_symbols(); ++c) {
      auto& m = by_target[a.next(s, c)];
      m.resize(a.num_symbols());
      m[c] = true;
    }
    for (const auto& [t, members] : by_target) {
      os << "  s" << s << " -> s" << t << " [label=\"" << join(symbol_cubes(members, k), "\\n") << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::string to_dot(const ws2s::TreeAutomaton& a, const std::string& title) {
  std::ostringstream os;
  os << header(title, a.tracks());
  os << "  frontier [shape=point];\n";
  for (State s = 0; s < a.num_states(); ++s) {
    os << "  s" << s << " [label=\"" << s << "\"" << (a.accepting(s) ? ", shape=doublecircle" : "") << "];\n";
  }
  os << "  frontier -> s" << a.frontier() << ";\n";
  const std::size_t k = a.tracks().size();
  for (State l = 0; l < a.num_states(); ++l) {
    for (State r = 0; r < a.num_states(); ++r) {
      std::map<State, std::vector<bool>> by_target;
      for (Symbol c = 0; c < a.num_symbols(); ++c) {
        auto& m = by_target[a.next(l, r, c)];
        m.resize(a.num_symbols());
        m[c] = true;
      }
      for (const auto& [t, members] : by_target) {
        const std::string aux = "h" + std::to_string(l) + "_" + std::to_string(r) + "_" + std::to_string(t);
        os << "  " << aux << " [shape=box, fontsize=9, label=\"" << join(symbol_cubes(members, k), "\\n") << "\"];\n";
        os << "  s" << l << " -> " << aux << " [label=\"L\", arrowhead=none];\n";
        os << "  s" << r << " -> " << aux << " [label=\"R\", arrowhead=none];\n";
        os << "  " << aux << " -> s" << t << ";\n";
      }
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace wsloop
