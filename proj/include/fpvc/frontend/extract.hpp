#pragma once

#include <fpvc/frontend/translate.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace fpvc {

class NoAssertions : public Error {
 public:
  using Error::Error;
};

struct DroppedAssertion {
  std::size_t index = 0;
  DropReason reason = DropReason::UnsupportedFunction;
  std::string detail;
};

struct ParseReport {
  std::size_t kept = 0;
  std::vector<DroppedAssertion> dropped;
  std::vector<std::string> warnings;

  std::size_t total() const { return kept + dropped.size(); }
};

/// Pulls declarations and assertions out of an SMT-LIB command list.
inline std::pair<ProcessedNVC, ParseReport> extract_nvc(const std::vector<SExpr>& forest) {
  ProcessedNVC nvc;
  ParseReport report;
  Env env;
  std::size_t index = 0;

  auto declare = [&](const std::string& raw, const SExpr& sort_expr) {
    std::string name = strip_bars(raw);
    if (name == "real_pi") return false;  // always read as the constant pi
    if (auto sort = parse_smt_sort(sort_expr)) {
      if (!env.vars.count(name)) nvc.vars.push_back({name, *sort, Interval::entire()});
      env.vars[name] = *sort;
      return true;
    }
    env.unsupported_vars.insert(name);
    return false;
  };

  auto add_assertion = [&](const SExpr& body) {
    std::size_t i = index++;
    try {
      Formula f = translate_assertion(body, env);
      nvc.assertions.push_back(std::move(f));
      ++report.kept;
    } catch (const TranslateError& e) {
      report.dropped.push_back({i, e.reason, e.symbol});
    }
  };

  for (const SExpr& cmd : forest) {
    const std::string& h = cmd.head();
    if (h == "declare-fun" && cmd.size() == 4 && cmd[1].is_atom() && cmd[2].is_list) {
      if (cmd[2].items.empty()) {
        declare(cmd[1].token, cmd[3]);
      } else {
        env.funs[strip_bars(cmd[1].token)] = parse_smt_sort(cmd[3]);
      }
    } else if (h == "declare-const" && cmd.size() == 3 && cmd[1].is_atom()) {
      declare(cmd[1].token, cmd[2]);
    } else if (h == "define-fun" && cmd.size() == 5 && cmd[1].is_atom() && cmd[2].is_list) {
      std::string name = strip_bars(cmd[1].token);
      if (!cmd[2].items.empty()) {
        // axiomatised helpers (Real_Sin and the like) are not interpreted
        env.funs[name] = parse_smt_sort(cmd[4]);
      } else if (cmd[3].is_atom("Bool")) {
        env.macros[cmd[1].token] = expand_lets(cmd[4], env.macros);
      } else if (declare(cmd[1].token, cmd[3])) {
        add_assertion(SExpr::list({SExpr::atom("="), cmd[1], cmd[4]}));
      }
    } else if (h == "assert" && cmd.size() == 2) {
      add_assertion(cmd[1]);
    }
    // everything else (set-info, set-logic, check-sat, get-model, ...) is irrelevant here
  }
  report.warnings = std::move(env.warnings);
  if (report.total() == 0) throw NoAssertions("input contains no assertions");
  if (report.kept == 0) throw NoAssertions("every assertion was dropped");
  return {std::move(nvc), std::move(report)};
}

inline std::pair<ProcessedNVC, ParseReport> parse_smt2(std::string_view text) { return extract_nvc(parse_sexprs(text)); }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fpvc
