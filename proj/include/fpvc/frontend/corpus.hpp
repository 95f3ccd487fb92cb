#pragma once

// Plain-text NVC format:
//
//   Bounds on variables:
//   x (real) ∈ [-0.5, 0.5]
//   n (int) in [1, 5]
//   y (float32)
//
//   NVC:
//   assert (<= (rnd32 RNE (* x x)) 1)
//
// Lines starting with "--" or ";" are comments. An assert may span lines.

#include <fpvc/frontend/extract.hpp>

#include <regex>
#include <sstream>
#include <string>

namespace fpvc {

namespace detail {

inline std::optional<Scalar> parse_endpoint(std::string t, bool& infinite) {
  infinite = false;
  for (std::size_t pos; (pos = t.find("\xE2\x88\x92")) != std::string::npos;) t.replace(pos, 3, "-");
  for (std::size_t pos; (pos = t.find("\xE2\x88\x9E")) != std::string::npos;) t.replace(pos, 3, "inf");
  if (t == "inf" || t == "+inf" || t == "-inf" || t == "oo" || t == "+oo" || t == "-oo") {
    infinite = true;
    return std::nullopt;
  }
  return parse_scalar(t);
}

inline int paren_balance(const std::string& s) {
  int b = 0;
  bool in_bar = false;
  for (char c : s) {
    if (c == '|') in_bar = !in_bar;
    if (in_bar) continue;
    if (c == ';') break;
    if (c == '(') ++b;
    if (c == ')') --b;
  }
  return b;
}

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline std::pair<ProcessedNVC, ParseReport> parse_corpus(const std::string& text) {
  static const std::regex bound_re(
      R"(^([A-Za-z_][A-Za-z0-9_.'!@$]*)\s*\((real|int|float32|float64)\)\s*(?:(?:∈|in)\s*([\[(])\s*([^,]+?)\s*,\s*([^\])]+?)\s*([\])]))?$)");
  ProcessedNVC nvc;
  ParseReport report;
  Env env;
  std::vector<std::pair<int, std::string>> asserts;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = detail::trim(line);
    if (t.empty() || t.rfind("--", 0) == 0 || t[0] == ';') continue;
    if (t == "Bounds on variables:" || t == "NVC:") continue;
    if (t.rfind("assert", 0) == 0 && (t.size() == 6 || t[6] == ' ' || t[6] == '(' || t[6] == '\t')) {
      std::string body = t.substr(6);
      int start = lineno;
      while ((detail::trim(body).empty() || detail::paren_balance(body) > 0) && std::getline(in, line)) {
        ++lineno;
        body += "\n" + line;
      }
      asserts.emplace_back(start, body);
      continue;
    }
    std::smatch m;
    if (!std::regex_match(t, m, bound_re)) throw ParseError(ParseError::Kind::InvalidToken, lineno, 1, t);
    std::string name = m[1];
    Sort sort = *Sort::parse(m[2].str());
    Interval bounds;
    if (m[3].matched) {
      bool lo_inf = false, hi_inf = false;
      auto lo = detail::parse_endpoint(m[4], lo_inf);
      auto hi = detail::parse_endpoint(m[5], hi_inf);
      if ((!lo && !lo_inf) || (!hi && !hi_inf)) throw ParseError(ParseError::Kind::InvalidToken, lineno, 1, t);
      if (sort.is_int()) {
        if (lo) lo = Scalar(ceil_of(*lo));
        if (hi) hi = Scalar(floor_of(*hi));
      }
      if (lo && hi && *lo > *hi) throw Error("empty bounds for " + name);
      bounds = Interval(lo, hi);
    }
    if (env.vars.count(name)) throw Error("duplicate declaration of " + name);
    env.vars[name] = sort;
    nvc.vars.push_back({name, sort, bounds});
  }

  std::size_t index = 0;
  for (auto& [ln, body] : asserts) {
    std::size_t i = index++;
    SExpr s;
    try {
      s = parse_sexpr(body);
    } catch (const ParseError& e) {
      throw ParseError(e.kind, ln + e.line - 1, e.col, body);
    }
    try {
      nvc.assertions.push_back(translate_assertion(s, env));
      ++report.kept;
    } catch (const TranslateError& e) {
      report.dropped.push_back({i, e.reason, e.symbol});
    }
  }
  report.warnings = std::move(env.warnings);
  if (report.total() == 0) throw NoAssertions("input contains no assertions");
  if (report.kept == 0) throw NoAssertions("every assertion was dropped");
  return {std::move(nvc), std::move(report)};
}

inline std::string bounds_string(const Interval& b) {
  std::string lo = b.lo() ? to_display_string(*b.lo()) : "-∞";
  std::string hi = b.hi() ? to_display_string(*b.hi()) : "∞";
  return (b.lo() ? "[" : "(") + lo + ", " + hi + (b.hi() ? "]" : ")");
}

inline std::string bound_line(const VarSpec& v) { return v.name + " (" + v.sort.to_string() + ") ∈ " + bounds_string(v.bounds); }

inline std::string write_corpus(const ProcessedNVC& nvc) {
  std::string out = "Bounds on variables:\n";
  for (const VarSpec& v : nvc.vars) out += bound_line(v) + "\n";
  out += "\nNVC:\n";
  for (const Formula& f : nvc.assertions) out += "assert " + to_sexpr(f) + "\n";
  return out;
}

inline bool looks_like_smt2(const std::string& path) {
  auto ends = [&](const std::string& suf) {
    return path.size() >= suf.size() && path.compare(path.size() - suf.size(), suf.size(), suf) == 0;
  };
  return ends(".smt2") || ends(".smt");
}

/// Loads either format, chosen by file extension.
inline std::pair<ProcessedNVC, ParseReport> load_nvc(const std::string& path) {
  std::string text = read_file(path);
  return looks_like_smt2(path) ? parse_smt2(text) : parse_corpus(text);
}

}  // namespace fpvc
