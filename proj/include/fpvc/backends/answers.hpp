#pragma once

// Interpretation of external prover output.

#include <fpvc/core/interval.hpp>
#include <fpvc/core/nvc.hpp>
#include <fpvc/fp/fptaylor.hpp>

#include <map>
#include <regex>
#include <sstream>
#include <string>

namespace fpvc {

enum class ExternalTool : unsigned char { DReal, MetiTarski };

enum class AnswerKind : unsigned char { Proved, Refuted, Unknown };

struct ProverAnswer {
  AnswerKind kind = AnswerKind::Unknown;
  std::map<std::string, Interval> model;  // dReal delta-sat boxes
  bool delta = false;                     // model only satisfies a delta-weakening, never certified
  std::string detail;
};

inline ProverAnswer parse_prover_answer(ExternalTool tool, const std::string& text) {
  ProverAnswer a;
  if (tool == ExternalTool::DReal) {
    static const std::regex unsat(R"((^|\n)\s*unsat\s*($|\n))");
    static const std::regex dsat(R"((^|\n)\s*delta-sat(?: with delta = ([^\n]*))?)");
    static const std::regex line(R"(^\s*([^\s:]+)\s*:\s*\[\s*([^,\]]+?)\s*,\s*([^\]]+?)\s*\]\s*$)");
    std::smatch m;
    if (std::regex_search(text, m, unsat)) {
      a.kind = AnswerKind::Proved;
      return a;
    }
    if (std::regex_search(text, m, dsat)) {
      a.kind = AnswerKind::Refuted;
      a.delta = true;
      if (m[2].matched) a.detail = "delta = " + m[2].str();
      std::istringstream in(text);
      std::string l;
      while (std::getline(in, l)) {
        std::smatch v;
        if (!std::regex_match(l, v, line)) continue;
        auto lo = parse_scalar(v[2].str()), hi = parse_scalar(v[3].str());
        bool ninf = v[2].str().find("inf") != std::string::npos, pinf = v[3].str().find("inf") != std::string::npos;
        if ((lo || ninf) && (hi || pinf))
          a.model[v[1]] = Interval(ninf ? std::nullopt : lo, pinf ? std::nullopt : hi);
      }
      return a;
    }
    if (text.find("unknown") != std::string::npos || text.find("timeout") != std::string::npos) return a;
    throw UnparsableOutput("unrecognized dReal output");
  }
  static const std::regex szs(R"(SZS status\s+([A-Za-z]+))");
  std::smatch m;
  if (!std::regex_search(text, m, szs)) throw UnparsableOutput("unrecognized MetiTarski output");
  std::string status = m[1];
  a.detail = status;
  // MetiTarski never refutes: anything but Theorem (GaveUp, Timeout, ...) is inconclusive
  if (status == "Theorem") a.kind = AnswerKind::Proved;
  return a;
}

}  // namespace fpvc
