#include "wsloop/parser.hpp"

#include <cctype>
#include <regex>
#include <sstream>
#include <vector>

namespace wsloop {

ParseError::ParseError(const std::string& what, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      detail_(what),
      line_(line),
      column_(column) {}

namespace {

enum class Tok {
  Ident, Number, LParen, RParen, Comma, Colon, Dot, Plus,
  Not, And, Or, Implies, Iff, Eq, Lt, Leq,
  KwEx1, KwAll1, KwEx2, KwAll2, KwIn, KwEpsilon, End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

std::vector<Token> tokenize(std::string_view src, int first_line) {
  std::vector<Token> out;
  int line = first_line;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const int tl = line;
    const int tc = col;
    auto emit = [&](Tok kind, std::size_t len) {
      out.push_back({kind, std::string(src.substr(i, len)), tl, tc});
      advance(len);
    };
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      const std::string word(src.substr(i, j - i));
      Tok kind = Tok::Ident;
      if (word == "ex1") kind = Tok::KwEx1;
      else if (word == "all1") kind = Tok::KwAll1;
      else if (word == "ex2") kind = Tok::KwEx2;
      else if (word == "all2") kind = Tok::KwAll2;
      else if (word == "in") kind = Tok::KwIn;
      else if (word == "epsilon") kind = Tok::KwEpsilon;
      emit(kind, j - i);
      continue;
    }
    if (c == '_') throw ParseError("identifiers starting with '_' are reserved", tl, tc);
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      emit(Tok::Number, j - i);
      continue;
    }
    const std::string_view rest = src.substr(i);
    if (rest.starts_with("<=>")) emit(Tok::Iff, 3);
    else if (rest.starts_with("<=")) emit(Tok::Leq, 2);
    else if (rest.starts_with("=>")) emit(Tok::Implies, 2);
    else if (c == '<') emit(Tok::Lt, 1);
    else if (c == '=') emit(Tok::Eq, 1);
    else if (c == '(') emit(Tok::LParen, 1);
    else if (c == ')') emit(Tok::RParen, 1);
    else if (c == ',') emit(Tok::Comma, 1);
    else if (c == ':') emit(Tok::Colon, 1);
    else if (c == '.') emit(Tok::Dot, 1);
    else if (c == '+') emit(Tok::Plus, 1);
    else if (c == '~') emit(Tok::Not, 1);
    else if (c == '&') emit(Tok::And, 1);
    else if (c == '|') emit(Tok::Or, 1);
    else throw ParseError(std::string("unexpected character '") + c + "'", tl, tc);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, Logic logic) : toks_(std::move(tokens)), logic_(logic) {}

  Formula parse_all() {
    Formula f = formula();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "' after formula");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().column); }
  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what);
    return next();
  }

  Formula formula() {
    Formula f = implication();
    while (accept(Tok::Iff)) f = Formula::iff(f, implication());
    return f;
  }

  Formula implication() {
    Formula f = disjunction();
    if (accept(Tok::Implies)) return Formula::implies(f, implication());
    return f;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (accept(Tok::Or)) f = Formula::disj(f, conjunction());
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (accept(Tok::And)) f = Formula::conj(f, unary());
    return f;
  }

  Formula unary() {
    switch (peek().kind) {
      case Tok::Not:
        next();
        return Formula::negate(unary());
      case Tok::LParen: {
        next();
        Formula f = formula();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::KwEx1: case Tok::KwAll1: case Tok::KwEx2: case Tok::KwAll2:
        return quantified();
      default:
        return atom();
    }
  }

  Formula quantified() {
    const Token kw = next();
    const bool second_order = kw.kind == Tok::KwEx2 || kw.kind == Tok::KwAll2;
    Op op = Op::ExistsFO;
    if (kw.kind == Tok::KwAll1) op = Op::ForallFO;
    if (kw.kind == Tok::KwEx2) op = Op::ExistsSO;
    if (kw.kind == Tok::KwAll2) op = Op::ForallSO;
    std::vector<std::string> vars;
    do {
      const Token& v = expect(Tok::Ident, "variable name");
      if (is_second_order(v.text) != second_order) {
        throw ParseError(second_order ? "'" + v.text + "' is first-order; " + kw.text + " binds set variables"
                                      : "'" + v.text + "' is second-order; " + kw.text + " binds position variables",
                         v.line, v.column);
      }
      vars.push_back(v.text);
    } while (accept(Tok::Comma));
    expect(Tok::Colon, "':' after quantified variables");
    Formula body = formula();
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = Formula::quantify(op, *it, body);
    return body;
  }

  Formula atom() {
    const Term l = term();
    switch (peek().kind) {
      case Tok::Eq: next(); return Formula::eq(l, term());
      case Tok::Lt: next(); return Formula::lt(l, term());
      case Tok::Leq: next(); return Formula::leq(l, term());
      case Tok::KwIn: {
        next();
        const Token& s = expect(Tok::Ident, "set variable after 'in'");
        if (!is_second_order(s.text)) throw ParseError("'" + s.text + "' is not a set variable", s.line, s.column);
        return Formula::in(l, s.text);
      }
      default:
        fail("expected '=', '<', '<=' or 'in'");
    }
  }

  Term term() { return logic_ == Logic::WS1S ? word_term() : tree_term(); }

  Term word_term() {
    const Token& t = peek();
    Term out;
    if (t.kind == Tok::Ident) {
      if (is_second_order(t.text)) fail("set variable '" + t.text + "' used as a position");
      out = Term::variable(t.text);
    } else if (t.kind == Tok::Number) {
      out = Term::numeral(numeral(t));
    } else if (t.kind == Tok::KwEpsilon) {
      fail("'epsilon' is WS2S syntax");
    } else {
      fail("expected a term");
    }
    next();
    while (peek().kind == Tok::Plus) {
      next();
      const Token& one = expect(Tok::Number, "'1' after '+'");
      if (one.text != "1") throw ParseError("only '+ 1' is allowed", one.line, one.column);
      ++out.offset;
    }
    if (peek().kind == Tok::Dot) fail("'.' child steps are WS2S syntax");
    return out;
  }

  Term tree_term() {
    const Token& t = peek();
    Term out;
    if (t.kind == Tok::Ident) {
      if (is_second_order(t.text)) fail("set variable '" + t.text + "' used as a position");
      out = Term::variable(t.text);
    } else if (t.kind == Tok::KwEpsilon) {
      out = Term::root_path("");
    } else if (t.kind == Tok::Number) {
      out = Term::root_path(bits(t));
    } else {
      fail("expected a term");
    }
    next();
    while (peek().kind == Tok::Dot) {
      next();
      const Token& b = expect(Tok::Number, "bit string after '.'");
      out.path += bits(b);
    }
    if (peek().kind == Tok::Plus) fail("'+ 1' is WS1S syntax");
    return out;
  }

  static std::uint32_t numeral(const Token& t) {
    if (t.text.size() > 9) throw ParseError("numeral too large", t.line, t.column);
    return static_cast<std::uint32_t>(std::stoul(t.text));
  }

  static std::string bits(const Token& t) {
    for (char c : t.text) {
      if (c != '0' && c != '1') throw ParseError("'" + t.text + "' is not a bit string", t.line, t.column);
    }
    return t.text;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Logic logic_;
};

Formula parse_at(std::string_view text, Logic logic, int first_line) {
  return Parser(tokenize(text, first_line), logic).parse_all();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string_view strip_comment(std::string_view s) {
  const auto hash = s.find('#');
  return hash == std::string_view::npos ? s : s.substr(0, hash);
}

}  // namespace

Formula parse_formula(std::string_view text, Logic logic) { return parse_at(text, logic, 1); }

void validate_rule(const Rule& rule) {
  const FreeVars fv = free_vars(rule.body);
  if (!fv.second_order.empty()) {
    throw std::invalid_argument("rule body has free set variable '" + *fv.second_order.begin() + "'");
  }
  for (const auto& v : fv.first_order) {
    if (v != "x" && v != "y") throw std::invalid_argument("rule body has free variable '" + v + "' (only x and y may be free)");
  }
}

Rule parse_rule(std::string_view text, std::optional<Logic> logic_override) {
  static const std::regex logic_re(R"(^logic\s*:\s*(\S+)$)");
  static const std::regex rule_re(R"(^rule\s+([A-Za-z][A-Za-z0-9_]*)\s*:\s*x\s*->\s*psi\s*\(\s*x\s*,\s*y\s*\)\s*,\s*y$)");
  static const std::regex psi_re(R"(^psi\s*\(\s*x\s*,\s*y\s*\)\s*:=)");

  std::optional<Logic> declared;
  std::optional<std::string> name;
  int line_no = 0;
  std::size_t offset = 0;
  while (offset <= text.size()) {
    const auto eol = text.find('\n', offset);
    const std::string_view raw = text.substr(offset, eol == std::string_view::npos ? std::string_view::npos : eol - offset);
    ++line_no;
    const std::string line(trim(strip_comment(raw)));
    std::smatch m;
    if (line.empty()) {
      // skip
    } else if (std::regex_match(line, m, logic_re)) {
      if (m[1] == "ws1s") declared = Logic::WS1S;
      else if (m[1] == "ws2s") declared = Logic::WS2S;
      else throw ParseError("unknown logic '" + m[1].str() + "' (expected ws1s or ws2s)", line_no, 1);
    } else if (std::regex_match(line, m, rule_re)) {
      name = m[1];
    } else if (std::regex_search(line, m, psi_re)) {
      if (!name) throw ParseError("missing 'rule <name>: x -> psi(x,y), y' header", line_no, 1);
      if (!declared && !logic_override) throw ParseError("missing 'logic:' declaration", line_no, 1);
      const Logic logic = logic_override ? *logic_override : *declared;
      const auto start = raw.find(":=") + 2;
      // Column positions inside the first formula line are reported relative
      // to the line start; padding keeps them aligned.
      std::string body(start, ' ');
      body += std::string(text.substr(offset + start));
      Rule rule{*name, logic, parse_at(body, logic, line_no)};
      try {
        validate_rule(rule);
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), line_no, 1);
      }
      return rule;
    } else {
      throw ParseError("unrecognized line '" + line + "'", line_no, 1);
    }
    if (eol == std::string_view::npos) break;
    offset = eol + 1;
  }
  if (!name) throw ParseError("missing 'rule <name>: x -> psi(x,y), y' header", line_no, 1);
  throw ParseError("missing 'psi(x,y) := ...' definition", line_no, 1);
}

}  // namespace wsloop
