#pragma once

// Small Pratt reader for the infix dialects we emit (FPTaylor expressions,
// TPTP formulas). The operator table is supplied by the caller.

#include <fpvc/frontend/sexpr.hpp>

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace fpvc {

struct InfixNode {
  enum class Kind { Number, Ident, Call, Prefix, Binary };
  Kind kind = Kind::Number;
  std::string text;  // number text, identifier, function or operator
  std::vector<InfixNode> args;
};

struct InfixGrammar {
  std::map<std::string, int> binary;  // operator -> binding power
  std::map<std::string, int> prefix;
  std::vector<std::string> right_assoc;
  std::string ident_extra = "_";  // extra identifier characters besides alnum
};

class InfixParser {
 public:
  InfixParser(std::string_view text, const InfixGrammar& g) : g_(g) { lex(text); }

  InfixNode parse_all() {
    InfixNode n = parse(0);
    if (pos_ < toks_.size()) fail("unexpected '" + toks_[pos_].text + "'");
    return n;
  }

  InfixNode parse(int min_bp) {
    InfixNode lhs = primary();
    while (pos_ < toks_.size()) {
      const std::string& op = toks_[pos_].text;
      if (toks_[pos_].kind != TokKind::Op) break;
      auto it = g_.binary.find(op);
      if (it == g_.binary.end() || it->second < min_bp) break;
      int bp = it->second;
      ++pos_;
      bool right = std::find(g_.right_assoc.begin(), g_.right_assoc.end(), op) != g_.right_assoc.end();
      InfixNode rhs = parse(right ? bp : bp + 1);
      lhs = InfixNode{InfixNode::Kind::Binary, op, {std::move(lhs), std::move(rhs)}};
    }
    return lhs;
  }

 private:
  enum class TokKind { Number, Ident, Op };
  struct Tok {
    TokKind kind;
    std::string text;
    std::size_t offset;
  };

  [[noreturn]] void fail(const std::string& why) const {
    std::size_t off = pos_ < toks_.size() ? toks_[pos_].offset : end_;
    throw ParseError(ParseError::Kind::InvalidToken, 1, static_cast<int>(off) + 1, why);
  }

  void lex(std::string_view s) {
    end_ = s.size();
    std::vector<std::string> ops;
    for (auto& [k, v] : g_.binary) ops.push_back(k);
    for (auto& [k, v] : g_.prefix) ops.push_back(k);
    for (const char* p : {"(", ")", ",", "[", "]", ":"}) ops.emplace_back(p);
    std::sort(ops.begin(), ops.end(), [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
    std::size_t i = 0;
    while (i < s.size()) {
      unsigned char c = static_cast<unsigned char>(s[i]);
      if (std::isspace(c)) {
        ++i;
        continue;
      }
      if (std::isdigit(c) || (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
        std::size_t j = i;
        while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) ++j;
        if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
          std::size_t k = j + 1;
          if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
          if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
            j = k;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
          }
        }
        toks_.push_back({TokKind::Number, std::string(s.substr(i, j - i)), i});
        i = j;
        continue;
      }
      if (std::isalpha(c) || g_.ident_extra.find(static_cast<char>(c)) != std::string::npos) {
        std::size_t j = i;
        while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) ||
                                g_.ident_extra.find(s[j]) != std::string::npos))
          ++j;
        toks_.push_back({TokKind::Ident, std::string(s.substr(i, j - i)), i});
        i = j;
        continue;
      }
      bool matched = false;
      for (const std::string& op : ops) {
        if (s.compare(i, op.size(), op) == 0) {
          toks_.push_back({TokKind::Op, op, i});
          i += op.size();
          matched = true;
          break;
        }
      }
      if (!matched) {
        pos_ = toks_.size();
        end_ = i;
        fail(std::string("unexpected character '") + static_cast<char>(c) + "'");
      }
    }
  }

  bool at(const std::string& t) const { return pos_ < toks_.size() && toks_[pos_].kind == TokKind::Op && toks_[pos_].text == t; }

  void expect(const std::string& t) {
    if (!at(t)) fail("expected '" + t + "'");
    ++pos_;
  }

  InfixNode primary() {
    if (pos_ >= toks_.size()) fail("unexpected end of input");
    Tok t = toks_[pos_++];
    switch (t.kind) {
      case TokKind::Number: return {InfixNode::Kind::Number, t.text, {}};
      case TokKind::Ident: {
        if (!at("(")) return {InfixNode::Kind::Ident, t.text, {}};
        ++pos_;
        InfixNode call{InfixNode::Kind::Call, t.text, {}};
        if (!at(")")) {
          call.args.push_back(parse(0));
          while (at(",")) {
            ++pos_;
            call.args.push_back(parse(0));
          }
        }
        expect(")");
        return call;
      }
      case TokKind::Op: {
        if (t.text == "(") {
          InfixNode n = parse(0);
          expect(")");
          return n;
        }
        auto it = g_.prefix.find(t.text);
        if (it == g_.prefix.end()) {
          --pos_;
          fail("unexpected '" + t.text + "'");
        }
        InfixNode operand = parse(it->second);
        return {InfixNode::Kind::Prefix, t.text, {std::move(operand)}};
      }
    }
    fail("unreachable");
  }

  const InfixGrammar& g_;
  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
  std::size_t end_ = 0;
};

}  // namespace fpvc
