#include "wsloop/position.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

namespace wsloop {

Position Position::path(std::string bits) {
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("'" + bits + "' is not a bit string");
  }
  return Position(std::move(bits));
}

bool operator<(const Position& a, const Position& b) {
  if (a.is_path() != b.is_path()) return !a.is_path();
  if (!a.is_path()) return a.number() < b.number();
  const auto& x = a.bits();
  const auto& y = b.bits();
  return x.size() != y.size() ? x.size() < y.size() : x < y;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Position parse_position(std::string_view text, Logic logic) {
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty position literal");
  if (logic == Logic::WS1S) {
    std::uint32_t n = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw std::invalid_argument("'" + std::string(text) + "' is not a natural number");
    }
    return Position::natural(n);
  }
  if (text == "e") return Position::path("");
  return Position::path(std::string(text));
}

PositionSet parse_position_set(std::string_view text, Logic logic) {
  PositionSet out;
  if (trim(text).empty()) return out;
  while (true) {
    const auto comma = text.find(',');
    out.insert(parse_position(text.substr(0, comma), logic));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::string format_position(const Position& p) {
  if (!p.is_path()) return std::to_string(p.number());
  return p.bits().empty() ? "e" : p.bits();
}

std::string format_position_set(const PositionSet& s) {
  std::string out;
  for (const auto& p : s) {
    if (!out.empty()) out += ',';
    out += format_position(p);
  }
  return out;
}

}  // namespace wsloop
