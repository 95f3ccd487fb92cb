#pragma once

// FPTaylor task files: export of one or more contexts, a reader for the same
// dialect, and extraction of the reported absolute error.

#include <fpvc/core/enclosures.hpp>
#include <fpvc/fp/context.hpp>
#include <fpvc/frontend/infix.hpp>

#include <regex>
#include <string>
#include <vector>

namespace fpvc {

class UnsupportedForBackend : public Error {
 public:
  UnsupportedForBackend(const std::string& backend, const std::string& what)
      : Error(backend + " cannot express " + what), backend(backend), construct(what) {}
  std::string backend, construct;
};

class ImportError : public Error {
 public:
  using Error::Error;
};

/// Output of an external tool that carries no recognizable result.
class UnparsableOutput : public Error {
 public:
  using Error::Error;
};

inline constexpr const char* kPiVar = "pi_";

namespace detail {

// exact when short, otherwise widened to 40 significant digits
inline std::string decimal_directed(const Scalar& q, bool up) {
  if (auto d = to_exact_decimal(q, 60)) return *d;
  return *to_exact_decimal(round_decimal(q, up, 40), 200);
}

inline std::string fptaylor_literal(const Scalar& v) {
  if (is_integer(v)) return v.get_num().get_str();
  if (auto d = to_exact_decimal(v, 40)) return *d;
  return "(" + v.get_num().get_str() + "/" + v.get_den().get_str() + ")";
}

inline void print_fptaylor(const Expr& e, bool nested, std::string& out) {
  auto fn = [&](const char* name) {
    out += name;
    out += "(";
    for (std::size_t i = 0; i < e.args().size(); ++i) {
      if (i) out += ", ";
      print_fptaylor(e.arg(i), true, out);
    }
    out += ")";
  };
  switch (e.op()) {
    case Op::Var: out += e.name(); return;
    case Op::Lit: out += fptaylor_literal(e.value()); return;
    case Op::Pi: out += kPiVar; return;
    case Op::Neg:
      out += "-(";
      print_fptaylor(e.arg(), false, out);
      out += ")";
      return;
    case Op::Abs: return fn("abs");
    case Op::Sqrt: return fn("sqrt");
    case Op::Sin: return fn("sin");
    case Op::Cos: return fn("cos");
    case Op::Exp: return fn("exp");
    case Op::Log: return fn("log");
    case Op::Min: return fn("min");
    case Op::Max: return fn("max");
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      if (nested) out += "(";
      print_fptaylor(e.arg(0), true, out);
      out += std::string(" ") + op_name(e.op()) + " ";
      print_fptaylor(e.arg(1), true, out);
      if (nested) out += ")";
      return;
    }
    case Op::Pow: {
      std::string base;
      print_fptaylor(e.arg(), true, base);
      if (base[0] == '-') base = "(" + base + ")";
      if (nested) out += "(";
      out += base + " ^ " + std::to_string(e.exponent());
      if (nested) out += ")";
      return;
    }
    case Op::RoundFP:
      out += e.format() == FloatKind::Single ? "rnd32(" : "rnd64(";
      print_fptaylor(e.arg(), true, out);
      out += ")";
      return;
    case Op::Mod: throw UnsupportedForBackend("fptaylor", "mod");
    case Op::RoundToInt: throw UnsupportedForBackend("fptaylor", "round_int");
  }
}

}  // namespace detail

inline std::string to_fptaylor_expr(const Expr& e) {
  std::string out;
  detail::print_fptaylor(e, false, out);
  return out;
}

/// One task file covering every given context. Throws UnsupportedForBackend.
inline std::string export_fptaylor(const std::vector<Expr>& exprs, const Box& box, unsigned prec = 113) {
  std::set<std::string> names;
  bool uses_pi = false;
  std::vector<std::string> lines;
  for (const Expr& e : exprs) {
    collect_free_vars(e, names);
    uses_pi = uses_pi || contains_op(e, Op::Pi);
    lines.push_back(to_fptaylor_expr(e));
  }
  // a bare task still declares the box
  if (exprs.empty())
    for (const auto& [name, iv] : box) names.insert(name);
  std::string out = "Variables\n";
  auto bound = [&](const std::string& name, const Interval& iv) {
    if (!iv.bounded()) throw UnsupportedForBackend("fptaylor", "unbounded variable " + name);
    out += "  real " + name + " in [" + detail::decimal_directed(*iv.lo(), false) + ", " +
           detail::decimal_directed(*iv.hi(), true) + "];\n";
  };
  for (const std::string& n : names) {
    auto it = box.find(n);
    bound(n, it == box.end() ? Interval::entire() : it->second);
  }
  if (uses_pi) bound(kPiVar, enclosure::pi(prec));
  if (!lines.empty()) {
    out += "\nExpressions\n";
    for (const std::string& l : lines) out += "  " + l + ";\n";
  }
  return out;
}

inline std::string export_fptaylor(const FPContext& ctx, const Box& box, unsigned prec = 113) {
  return export_fptaylor(std::vector<Expr>{ctx.expr}, box, prec);
}

struct FPTaylorTask {
  std::vector<std::pair<std::string, Interval>> vars;
  std::vector<Expr> exprs;
};

namespace detail {

inline const InfixGrammar& fptaylor_grammar() {
  static const InfixGrammar g{{{"+", 10}, {"-", 10}, {"*", 20}, {"/", 20}, {"^", 40}}, {{"-", 30}}, {"^"}, "_"};
  return g;
}

inline Scalar number_of(const std::string& text) {
  auto v = parse_scalar(text);
  if (!v) throw ImportError("bad number " + text);
  return *v;
}

inline Expr expr_from_infix(const InfixNode& n) {
  using K = InfixNode::Kind;
  switch (n.kind) {
    case K::Number: return Expr::lit(number_of(n.text));
    case K::Ident: return n.text == kPiVar ? Expr::pi() : Expr::var(n.text);
    case K::Prefix: {
      Expr a = expr_from_infix(n.args[0]);
      return a.is_lit() ? Expr::lit(-a.value()) : -a;
    }
    case K::Binary: {
      Expr a = expr_from_infix(n.args[0]);
      if (n.text == "^") {
        const InfixNode& k = n.args[1];
        if (k.kind != K::Number) throw ImportError("non-literal exponent");
        Scalar v = number_of(k.text);
        if (!is_integer(v) || v < 0) throw ImportError("exponent must be a natural number");
        return Expr::pow(a, static_cast<unsigned>(v.get_num().get_ui()));
      }
      Expr b = expr_from_infix(n.args[1]);
      if (n.text == "/" && a.is_lit() && b.is_lit() && b.value() != 0) return Expr::lit(a.value() / b.value());
      static const std::map<std::string, Op> ops{{"+", Op::Add}, {"-", Op::Sub}, {"*", Op::Mul}, {"/", Op::Div}};
      return Expr::binary(ops.at(n.text), a, b);
    }
    case K::Call: {
      static const std::map<std::string, Op> unary{{"abs", Op::Abs}, {"sqrt", Op::Sqrt}, {"sin", Op::Sin},
                                                   {"cos", Op::Cos}, {"exp", Op::Exp},   {"log", Op::Log}};
      static const std::map<std::string, Op> binary{{"min", Op::Min}, {"max", Op::Max}};
      std::vector<Expr> args;
      for (const InfixNode& c : n.args) args.push_back(expr_from_infix(c));
      if (n.text == "rnd32" || n.text == "rnd64") {
        if (args.size() != 1) throw ImportError(n.text + " takes one argument");
        return Expr::round_fp(n.text == "rnd32" ? FloatKind::Single : FloatKind::Double, RoundMode::NearestEven, args[0]);
      }
      if (auto it = unary.find(n.text); it != unary.end() && args.size() == 1) return Expr::unary(it->second, args[0]);
      if (auto it = binary.find(n.text); it != binary.end() && args.size() == 2)
        return Expr::binary(it->second, args[0], args[1]);
      throw ImportError("unknown function " + n.text);
    }
  }
  throw ImportError("bad expression");
}

inline std::vector<std::string> split_statements(const std::string& body) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : body) {
    if (c == ';') {
      if (cur.find_first_not_of(" \t\r\n") != std::string::npos) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (cur.find_first_not_of(" \t\r\n") != std::string::npos) out.push_back(cur);
  return out;
}

}  // namespace detail

/// Parses a task file as written by export_fptaylor. Rounding operators are read back as RNE.
inline FPTaylorTask parse_fptaylor(const std::string& text) {
  FPTaylorTask task;
  auto vpos = text.find("Variables");
  auto epos = text.find("Expressions");
  std::string vars = vpos == std::string::npos ? "" : text.substr(vpos + 9, (epos == std::string::npos ? text.size() : epos) - vpos - 9);
  std::string exprs = epos == std::string::npos ? "" : text.substr(epos + 11);
  static const std::regex var_re(R"(^\s*real\s+([A-Za-z_][A-Za-z0-9_]*)\s+in\s+\[\s*([^,\]]+?)\s*,\s*([^\]]+?)\s*\]\s*$)");
  for (const std::string& s : detail::split_statements(vars)) {
    std::smatch m;
    if (!std::regex_match(s, m, var_re)) throw ImportError("bad variable declaration: " + s);
    task.vars.emplace_back(m[1].str(), Interval::closed(detail::number_of(m[2]), detail::number_of(m[3])));
  }
  for (const std::string& s : detail::split_statements(exprs)) {
    InfixParser p(s, detail::fptaylor_grammar());
    task.exprs.push_back(detail::expr_from_infix(p.parse_all()));
  }
  return task;
}

/// Reads the absolute error reported by an external tool: the number after
/// "absolute error ...:", or the whole text when it is a bare number.
inline Scalar import_external_bound(const std::string& text) {
  static const std::regex labelled(R"(absolute error[^:\n]*:\s*([-+]?(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][-+]?[0-9]+)?))",
                                   std::regex::icase);
  static const std::regex bare(R"(^\s*([-+]?(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][-+]?[0-9]+)?)\s*$)");
  std::smatch m;
  std::string number;
  if (std::regex_search(text, m, labelled)) number = m[1];
  else if (std::regex_match(text, m, bare)) number = m[1];
  else throw UnparsableOutput("no absolute error found in tool output");
  auto v = parse_scalar(number);
  if (!v) throw UnparsableOutput("bad number " + number);
  if (*v < 0) throw UnparsableOutput("negative error bound " + number);
  return *v;
}

}  // namespace fpvc
