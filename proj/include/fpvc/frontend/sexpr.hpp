#pragma once

#include <fpvc/core/nvc.hpp>

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace fpvc {

struct SExpr {
  bool is_list = false;
  std::string token;  // atoms only
  std::vector<SExpr> items;
  int line = 0, col = 0;

  static SExpr atom(std::string t, int line = 0, int col = 0) { return {false, std::move(t), {}, line, col}; }
  static SExpr list(std::vector<SExpr> xs, int line = 0, int col = 0) { return {true, {}, std::move(xs), line, col}; }

  bool is_atom() const { return !is_list; }
  bool is_atom(std::string_view t) const { return !is_list && token == t; }
  std::size_t size() const { return items.size(); }
  const SExpr& operator[](std::size_t i) const { return items.at(i); }

  /// Head symbol of a list whose first item is an atom, else "".
  const std::string& head() const {
    static const std::string empty;
    return is_list && !items.empty() && items[0].is_atom() ? items[0].token : empty;
  }
};

class ParseError : public Error {
 public:
  enum class Kind { UnbalancedParens, InvalidToken };
  ParseError(Kind kind, int line, int col, const std::string& what)
      : Error((kind == Kind::UnbalancedParens ? "unbalanced parentheses" : "invalid token") + std::string(" at ") +
              std::to_string(line) + ":" + std::to_string(col) + (what.empty() ? "" : ": " + what)),
        kind(kind),
        line(line),
        col(col) {}
  Kind kind;
  int line, col;
};

namespace detail {

class SExprLexer {
 public:
  explicit SExprLexer(std::string_view text) : s_(text) {}

  std::vector<SExpr> parse_all() {
    std::vector<SExpr> out;
    std::vector<SExpr> stack;  // open lists
    for (;;) {
      skip_space();
      if (i_ >= s_.size()) break;
      char c = s_[i_];
      int l = line_, k = col_;
      if (c == '(') {
        advance();
        stack.push_back(SExpr::list({}, l, k));
      } else if (c == ')') {
        if (stack.empty()) throw ParseError(ParseError::Kind::UnbalancedParens, l, k, "unexpected ')'");
        advance();
        SExpr done = std::move(stack.back());
        stack.pop_back();
        emit(std::move(done), stack, out);
      } else {
        emit(read_atom(), stack, out);
      }
    }
    if (!stack.empty())
      throw ParseError(ParseError::Kind::UnbalancedParens, stack.back().line, stack.back().col, "unclosed '('");
    return out;
  }

 private:
  static void emit(SExpr e, std::vector<SExpr>& stack, std::vector<SExpr>& out) {
    if (stack.empty()) out.push_back(std::move(e));
    else stack.back().items.push_back(std::move(e));
  }

  void advance() {
    if (s_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip_space() {
    while (i_ < s_.size()) {
      char c = s_[i_];
      if (c == ';') {
        while (i_ < s_.size() && s_[i_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read_atom() {
    int l = line_, k = col_;
    std::string tok;
    char c = s_[i_];
    if (c == '"' || c == '|') {
      char close = c;
      tok.push_back(c);
      advance();
      for (;;) {
        if (i_ >= s_.size()) throw ParseError(ParseError::Kind::InvalidToken, l, k, "unterminated literal");
        char d = s_[i_];
        tok.push_back(d);
        advance();
        if (d == close) {
          // "" inside a string is an escaped quote
          if (close == '"' && i_ < s_.size() && s_[i_] == '"') {
            tok.push_back('"');
            advance();
            continue;
          }
          break;
        }
      }
      return SExpr::atom(std::move(tok), l, k);
    }
    while (i_ < s_.size()) {
      char d = s_[i_];
      if (d == '(' || d == ')' || d == ';' || d == '"' || std::isspace(static_cast<unsigned char>(d))) break;
      tok.push_back(d);
      advance();
    }
    if (!valid(tok)) throw ParseError(ParseError::Kind::InvalidToken, l, k, tok);
    return SExpr::atom(std::move(tok), l, k);
  }

  static bool valid(const std::string& t) {
    if (t.empty() || t == "|") return false;
    if (t[0] == '#') {
      if (t.size() < 3) return false;
      const char* allowed = t[1] == 'b' ? "01" : t[1] == 'x' ? "0123456789abcdefABCDEF" : nullptr;
      if (!allowed) return false;
      return t.find_first_not_of(allowed, 2) == std::string::npos;
    }
    for (unsigned char ch : t)
      if (ch < 0x20 || ch == 0x7f) return false;
    return true;
  }

  std::string_view s_;
  std::size_t i_ = 0;
  int line_ = 1, col_ = 1;
};

}  // namespace detail

/// Parses an s-expression forest. Comments run from ';' to end of line.
inline std::vector<SExpr> parse_sexprs(std::string_view text) { return detail::SExprLexer(text).parse_all(); }

inline SExpr parse_sexpr(std::string_view text) {
  auto forest = parse_sexprs(text);
  if (forest.size() != 1) throw ParseError(ParseError::Kind::InvalidToken, 1, 1, "expected exactly one s-expression");
  return std::move(forest[0]);
}

inline void print(const SExpr& e, std::string& out) {
  if (e.is_atom()) {
    out += e.token;
    return;
  }
  out += '(';
  for (std::size_t i = 0; i < e.items.size(); ++i) {
    if (i) out += ' ';
    print(e.items[i], out);
  }
  out += ')';
}

inline std::string to_string(const SExpr& e) {
  std::string s;
  print(e, s);
  return s;
}

inline bool operator==(const SExpr& a, const SExpr& b) {
  if (a.is_list != b.is_list) return false;
  if (!a.is_list) return a.token == b.token;
  return a.items == b.items;
}

}  // namespace fpvc
