#pragma once

// MetiTarski TPTP export: the NVC is refuted by proving the universally
// quantified negation of its conjunction over the box. Also a reader for the
// emitted subset.

#include <fpvc/backends/dreal.hpp>
#include <fpvc/frontend/infix.hpp>

#include <cctype>
#include <regex>
#include <string>

namespace fpvc {

/// TPTP variables start with an upper-case letter.
inline std::string tptp_var_name(const std::string& name) {
  std::string out;
  for (char c : name) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  if (out.empty() || !std::isalpha(static_cast<unsigned char>(out[0]))) out = "V" + out;
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

namespace detail {

inline std::string tptp_literal(const Scalar& v) {
  Scalar a = abs_of(v);
  std::string s = is_integer(a) ? a.get_num().get_str() : a.get_num().get_str() + "/" + a.get_den().get_str();
  if (v < 0) return "-(" + s + ")";
  return is_integer(a) ? s : "(" + s + ")";
}

inline void print_tptp(const Expr& e, std::string& out) {
  auto fn = [&](const char* name) {
    out += name;
    out += "(";
    for (std::size_t i = 0; i < e.args().size(); ++i) {
      if (i) out += ", ";
      print_tptp(e.arg(i), out);
    }
    out += ")";
  };
  switch (e.op()) {
    case Op::Var: out += tptp_var_name(e.name()); return;
    case Op::Lit: out += tptp_literal(e.value()); return;
    case Op::Pi: out += tptp_var_name(kPiVar); return;
    case Op::Neg:
      out += "-(";
      print_tptp(e.arg(), out);
      out += ")";
      return;
    case Op::Abs: return fn("abs");
    case Op::Sqrt: return fn("sqrt");
    case Op::Sin: return fn("sin");
    case Op::Cos: return fn("cos");
    case Op::Exp: return fn("exp");
    case Op::Log: return fn("ln");
    case Op::Min: return fn("min");
    case Op::Max: return fn("max");
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
      out += "(";
      print_tptp(e.arg(0), out);
      out += std::string(" ") + op_name(e.op()) + " ";
      print_tptp(e.arg(1), out);
      out += ")";
      return;
    case Op::Pow: {
      // a leading minus would bind looser than ^
      std::string base;
      print_tptp(e.arg(), base);
      if (base[0] == '-') base = "(" + base + ")";
      out += "(" + base + " ^ " + std::to_string(e.exponent()) + ")";
      return;
    }
    case Op::Mod: throw UnsupportedForBackend("metitarski", "mod");
    case Op::RoundToInt: throw UnsupportedForBackend("metitarski", std::string("round_int ") + std::string(smt_token(e.mode())));
    case Op::RoundFP: throw UnsupportedForBackend("metitarski", "floating-point rounding");
  }
}

inline void print_tptp(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case FKind::True: out += "$true"; return;
    case FKind::False: out += "$false"; return;
    case FKind::Atom: {
      static const char* rel[] = {"<=", "<", ">=", ">", "="};
      out += "(";
      print_tptp(f.lhs(), out);
      out += std::string(" ") + rel[static_cast<int>(f.rel())] + " ";
      print_tptp(f.rhs(), out);
      out += ")";
      return;
    }
    case FKind::Not:
      out += "~";
      print_tptp(f.arg(), out);
      return;
    case FKind::Implies:
      out += "(";
      print_tptp(f.arg(0), out);
      out += " => ";
      print_tptp(f.arg(1), out);
      out += ")";
      return;
    case FKind::And:
    case FKind::Or: {
      const char* sep = f.kind() == FKind::And ? " & " : " | ";
      out += "(";
      for (std::size_t i = 0; i < f.args().size(); ++i) {
        if (i) out += sep;
        print_tptp(f.arg(i), out);
      }
      out += ")";
      return;
    }
  }
}

}  // namespace detail

inline std::string to_tptp(const Formula& f) {
  std::string s;
  detail::print_tptp(f, s);
  return s;
}

/// fof(nvc, conjecture, ![Vars] : (box => ~(A1 & ... & An))).
inline std::string export_metitarski_tptp(const ProcessedNVC& nvc, const Box& box, unsigned pi_digits = 16) {
  for (const VarSpec& v : nvc.vars)
    if (tptp_var_name(v.name) == tptp_var_name(kPiVar) && v.name != kPiVar)
      throw UnsupportedForBackend("metitarski", "variable name clash on " + v.name);
  std::set<std::string> used = nvc.used_vars();
  std::vector<Formula> bounds;
  std::vector<std::string> names;
  auto add_bounds = [&](const std::string& name, const Interval& iv, const Expr& var) {
    names.push_back(tptp_var_name(name));
    if (iv.lo()) bounds.push_back(Formula::le(Expr::lit(*iv.lo()), var));
    if (iv.hi()) bounds.push_back(Formula::le(var, Expr::lit(*iv.hi())));
  };
  for (const VarSpec& v : nvc.vars) {
    if (!used.count(v.name)) continue;
    auto it = box.find(v.name);
    add_bounds(v.name, it == box.end() ? v.bounds : it->second, Expr::var(v.name));
  }
  if (detail::uses_pi(nvc)) add_bounds(kPiVar, detail::pi_decimal_enclosure(pi_digits), Expr::pi());

  Formula nvc_conj = nvc.assertions.empty() ? Formula::truth(true)
                     : nvc.assertions.size() == 1 ? nvc.assertions[0]
                                                  : Formula::conj(nvc.assertions);
  std::string goal = "~(" + to_tptp(nvc_conj) + ")";
  if (!bounds.empty()) {
    Formula b = bounds.size() == 1 ? bounds[0] : Formula::conj(bounds);
    goal = "(" + to_tptp(b) + " => " + goal + ")";
  }
  std::string out = "fof(nvc, conjecture, ";
  if (!names.empty()) {
    out += "![";
    for (std::size_t i = 0; i < names.size(); ++i) out += (i ? ", " : "") + names[i];
    out += "] : ";
  }
  return out + goal + ").\n";
}

namespace detail {

inline const InfixGrammar& tptp_grammar() {
  static const InfixGrammar g{{{"=>", 1},
                               {"|", 2},
                               {"&", 3},
                               {"<=", 5},
                               {"<", 5},
                               {">=", 5},
                               {">", 5},
                               {"=", 5},
                               {"+", 10},
                               {"-", 10},
                               {"*", 20},
                               {"/", 20},
                               {"^", 40}},
                              {{"~", 4}, {"-", 30}},
                              {"=>", "^"},
                              "_$"};
  return g;
}

inline Expr tptp_expr(const InfixNode& n, const std::map<std::string, std::string>& names) {
  using K = InfixNode::Kind;
  if (n.kind == K::Ident) {
    auto it = names.find(n.text);
    if (it == names.end()) throw ImportError("unknown symbol " + n.text);
    return it->second == kPiVar ? Expr::pi() : Expr::var(it->second);
  }
  if (n.kind == K::Call) {
    if (n.text == "ln") return Expr::unary(Op::Log, tptp_expr(n.args.at(0), names));
    std::vector<Expr> args;
    for (const InfixNode& c : n.args) args.push_back(tptp_expr(c, names));
    static const std::map<std::string, Op> unary{{"abs", Op::Abs}, {"sqrt", Op::Sqrt}, {"sin", Op::Sin}, {"cos", Op::Cos}, {"exp", Op::Exp}};
    if (auto it = unary.find(n.text); it != unary.end() && args.size() == 1) return Expr::unary(it->second, args[0]);
    if ((n.text == "min" || n.text == "max") && args.size() == 2)
      return Expr::binary(n.text == "min" ? Op::Min : Op::Max, args[0], args[1]);
    throw ImportError("unknown function " + n.text);
  }
  if (n.kind == K::Prefix) {
    Expr a = tptp_expr(n.args[0], names);
    return a.is_lit() ? Expr::lit(-a.value()) : -a;
  }
  if (n.kind == K::Binary && n.text == "^") {
    Scalar k = number_of(n.args[1].text);
    return Expr::pow(tptp_expr(n.args[0], names), static_cast<unsigned>(k.get_num().get_ui()));
  }
  if (n.kind == K::Binary) {
    Expr a = tptp_expr(n.args[0], names), b = tptp_expr(n.args[1], names);
    if (n.text == "/" && a.is_lit() && b.is_lit() && b.value() != 0) return Expr::lit(a.value() / b.value());
    static const std::map<std::string, Op> ops{{"+", Op::Add}, {"-", Op::Sub}, {"*", Op::Mul}, {"/", Op::Div}};
    auto it = ops.find(n.text);
    if (it == ops.end()) throw ImportError("formula where a term was expected: " + n.text);
    return Expr::binary(it->second, a, b);
  }
  return Expr::lit(number_of(n.text));
}

inline Formula tptp_formula(const InfixNode& n, const std::map<std::string, std::string>& names) {
  using K = InfixNode::Kind;
  if (n.kind == K::Ident && (n.text == "$true" || n.text == "$false")) return Formula::truth(n.text == "$true");
  if (n.kind == K::Prefix && n.text == "~") return Formula::negate(tptp_formula(n.args[0], names));
  if (n.kind == K::Binary) {
    if (n.text == "=>") return Formula::implies(tptp_formula(n.args[0], names), tptp_formula(n.args[1], names));
    if (n.text == "&" || n.text == "|") {
      std::vector<Formula> xs{tptp_formula(n.args[0], names), tptp_formula(n.args[1], names)};
      return n.text == "&" ? Formula::conj(std::move(xs)) : Formula::disj(std::move(xs));
    }
    static const std::map<std::string, Rel> rels{{"<=", Rel::LE}, {"<", Rel::LT}, {">=", Rel::GE}, {">", Rel::GT}, {"=", Rel::EQ}};
    if (auto it = rels.find(n.text); it != rels.end())
      return Formula::atom(it->second, tptp_expr(n.args[0], names), tptp_expr(n.args[1], names));
  }
  throw ImportError("not a formula");
}

}  // namespace detail

/// Reads back an exported conjecture; `names` maps the original variable
/// names (pi_ included) so that TPTP variables can be renamed back.
inline Formula parse_tptp_conjecture(const std::string& text, const std::vector<std::string>& names) {
  static const std::regex fof(R"(^\s*fof\(\s*[A-Za-z0-9_]+\s*,\s*conjecture\s*,\s*([\s\S]*)\)\.\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, fof)) throw ImportError("not a TPTP conjecture");
  std::string body = m[1];
  static const std::regex quant(R"(^\s*!\s*\[[^\]]*\]\s*:)");
  body = std::regex_replace(body, quant, "", std::regex_constants::format_first_only);
  std::map<std::string, std::string> back;
  for (const std::string& n : names) back[tptp_var_name(n)] = n;
  back[tptp_var_name(kPiVar)] = kPiVar;
  InfixParser p(body, detail::tptp_grammar());
  return detail::tptp_formula(p.parse_all(), back);
}

}  // namespace fpvc
