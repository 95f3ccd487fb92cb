#pragma once

// Name-based translation of SMT-LIB terms into the Expr/Formula IR.

#include <fpvc/core/nvc.hpp>
#include <fpvc/frontend/fp_literal.hpp>
#include <fpvc/frontend/sexpr.hpp>

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fpvc {

enum class DropReason : unsigned char { UnsupportedFunction, MixedPrecision, UnknownSort };

inline const char* to_string(DropReason r) {
  switch (r) {
    case DropReason::UnsupportedFunction: return "UnsupportedFunction";
    case DropReason::MixedPrecision: return "MixedPrecision";
    case DropReason::UnknownSort: return "UnknownSort";
  }
  return "?";
}

/// Raised for constructs outside the supported fragment; the caller drops the assertion.
class TranslateError : public Error {
 public:
  TranslateError(DropReason reason, std::string symbol)
      : Error(std::string(to_string(reason)) + ": " + symbol), reason(reason), symbol(std::move(symbol)) {}
  DropReason reason;
  std::string symbol;
};

struct Env {
  std::map<std::string, Sort> vars;
  std::set<std::string> unsupported_vars;        // declared with a sort we cannot model
  std::map<std::string, std::optional<Sort>> funs;  // functions with arguments: return sort if supported
  std::map<std::string, SExpr> macros;          // zero-arity boolean definitions, inlined
  std::vector<std::string> warnings;
};

inline std::string strip_bars(const std::string& s) {
  if (s.size() >= 2 && s.front() == '|' && s.back() == '|') return s.substr(1, s.size() - 2);
  return s;
}

inline std::optional<Sort> parse_smt_sort(const SExpr& s) {
  if (s.is_atom()) {
    const std::string& t = s.token;
    if (t == "Real") return Sort::real();
    if (t == "Int") return Sort::integer();
    if (t == "Float32") return Sort::floating(FloatKind::Single);
    if (t == "Float64") return Sort::floating(FloatKind::Double);
    return std::nullopt;
  }
  if (s.size() == 4 && s[0].is_atom("_") && s[1].is_atom("FloatingPoint")) {
    if (s[2].is_atom("8") && s[3].is_atom("24")) return Sort::floating(FloatKind::Single);
    if (s[2].is_atom("11") && s[3].is_atom("53")) return Sort::floating(FloatKind::Double);
  }
  return std::nullopt;
}

enum class FpInference : unsigned char { Single, Double, Mixed, Unknown };

inline const char* to_string(FpInference f) {
  switch (f) {
    case FpInference::Single: return "Single";
    case FpInference::Double: return "Double";
    case FpInference::Mixed: return "MixedPrecision";
    case FpInference::Unknown: return "Unknown";
  }
  return "?";
}

namespace detail {

inline void collect_fp_kinds(const Expr& e, const std::map<std::string, Sort>& vars, std::set<FloatKind>& out) {
  switch (e.op()) {
    case Op::Var: {
      auto it = vars.find(e.name());
      if (it != vars.end() && it->second.is_float()) out.insert(it->second.format);
      return;
    }
    case Op::Lit:
      if (e.lit_type()) out.insert(*e.lit_type());
      return;
    case Op::RoundFP: out.insert(e.format()); return;  // a nested operation already has its type
    default: break;
  }
  for (const Expr& c : e.args()) collect_fp_kinds(c, vars, out);
}

}  // namespace detail

/// Format of an FP operation from the FP-typed leaves of its operands.
inline FpInference infer_fp_format(const std::vector<Expr>& operands, const std::map<std::string, Sort>& vars) {
  std::set<FloatKind> kinds;
  for (const Expr& e : operands) detail::collect_fp_kinds(e, vars, kinds);
  if (kinds.size() > 1) return FpInference::Mixed;
  if (kinds.empty()) return FpInference::Unknown;
  return *kinds.begin() == FloatKind::Single ? FpInference::Single : FpInference::Double;
}

/// Inlines let bindings and boolean macros.
inline SExpr expand_lets(const SExpr& s, const std::map<std::string, SExpr>& scope) {
  if (s.is_atom()) {
    auto it = scope.find(s.token);
    return it == scope.end() ? s : it->second;
  }
  if (s.head() == "let" && s.size() == 3 && s[1].is_list) {
    std::map<std::string, SExpr> inner = scope;
    for (const SExpr& b : s[1].items) {
      if (!b.is_list || b.size() != 2 || !b[0].is_atom()) throw TranslateError(DropReason::UnsupportedFunction, "let");
      inner[b[0].token] = expand_lets(b[1], scope);  // parallel binding
    }
    return expand_lets(s[2], inner);
  }
  SExpr out = s;
  for (SExpr& c : out.items) c = expand_lets(c, scope);
  return out;
}

class Translator {
 public:
  explicit Translator(Env& env) : env_(env) {}

  Formula formula(const SExpr& s) {
    if (s.is_atom()) {
      if (s.token == "true") return Formula::truth(true);
      if (s.token == "false") return Formula::truth(false);
      return unknown_symbol(s.token);
    }
    const std::string& h = s.head();
    std::size_t n = s.size() - 1;
    if (h == "not" && n == 1) return Formula::negate(formula(s[1]));
    if (h == "and" || h == "or") {
      std::vector<Formula> xs;
      for (std::size_t i = 1; i <= n; ++i) xs.push_back(formula(s[i]));
      if (xs.empty()) return Formula::truth(h == "and");
      if (xs.size() == 1) return xs[0];
      return h == "and" ? Formula::conj(std::move(xs)) : Formula::disj(std::move(xs));
    }
    if ((h == "=>" || h == "implies") && n >= 2) {
      // right associative
      Formula acc = formula(s[n]);
      for (std::size_t i = n - 1; i >= 1; --i) acc = Formula::implies(formula(s[i]), acc);
      return acc;
    }
    if (h == "ite" && n == 3) {
      Formula c = formula(s[1]);
      return Formula::conj({Formula::implies(c, formula(s[2])), Formula::implies(Formula::negate(c), formula(s[3]))});
    }
    if ((h == "=" || h == "fp.eq") && n >= 2) {
      if (h == "=" && is_boolean(s[1])) {
        std::vector<Formula> parts;
        for (std::size_t i = 1; i < n; ++i) {
          Formula a = formula(s[i]), b = formula(s[i + 1]);
          parts.push_back(Formula::implies(a, b));
          parts.push_back(Formula::implies(b, a));
        }
        return parts.size() == 1 ? parts[0] : Formula::conj(std::move(parts));
      }
      return chain(Rel::EQ, s);
    }
    if (h == "distinct" && n >= 2) {
      std::vector<Expr> xs;
      for (std::size_t i = 1; i <= n; ++i) xs.push_back(expr(s[i]));
      std::vector<Formula> parts;
      for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j) parts.push_back(Formula::negate(Formula::eq(xs[i], xs[j])));
      return parts.size() == 1 ? parts[0] : Formula::conj(std::move(parts));
    }
    if (auto rel = comparison(h); rel && n >= 2) return chain(*rel, s);
    if ((h == "isFiniteFloat" || h == "is_finite" || h == "fp.isFinite") && n == 1) {
      Expr x = expr(s[1]);
      FloatKind k = require_format({x}, h);
      const FloatFormat f = FloatFormat::of(k);
      return Formula::conj({Formula::le(Expr::lit(f.min_finite), x), Formula::le(x, Expr::lit(f.max_finite))});
    }
    if (h.empty()) throw TranslateError(DropReason::UnsupportedFunction, to_string(s));
    return unknown_symbol(h);
  }

  Expr expr(const SExpr& s) {
    if (s.is_atom()) return atom_expr(s.token);
    if (s[0].is_list) return indexed_application(s);
    const std::string& h = s.head();
    std::size_t n = s.size() - 1;

    if (h == "-" && n == 1) {
      Expr a = expr(s[1]);
      if (a.is_lit()) return Expr::lit(-a.value(), a.lit_type());
      return -a;
    }
    if ((h == "+" || h == "-" || h == "*" || h == "/") && n >= 1) {
      Op op = h == "+" ? Op::Add : h == "-" ? Op::Sub : h == "*" ? Op::Mul : Op::Div;
      Expr acc = expr(s[1]);
      for (std::size_t i = 2; i <= n; ++i) {
        Expr b = expr(s[i]);
        if (op == Op::Div && acc.is_lit() && b.is_lit() && b.value() != 0 && !acc.lit_type() && !b.lit_type())
          acc = Expr::lit(acc.value() / b.value());
        else
          acc = Expr::binary(op, acc, b);
      }
      return acc;
    }
    if (h == "abs" && n == 1) return Expr::unary(Op::Abs, expr(s[1]));
    if ((h == "min" || h == "max") && n == 2) return Expr::binary(h == "min" ? Op::Min : Op::Max, expr(s[1]), expr(s[2]));
    if (h == "mod" && n == 2) return Expr::binary(Op::Mod, expr(s[1]), expr(s[2]));
    if (auto op = transcendental(h); op && n == 1) return Expr::unary(*op, expr(s[1]));
    if ((h == "^" || h == "pow" || h == "power") && n == 2) {
      Expr base = expr(s[1]);
      auto k = s[2].is_atom() ? parse_scalar(s[2].token) : std::nullopt;
      if (!k || !is_integer(*k) || *k < 0 || *k > 1000) throw TranslateError(DropReason::UnsupportedFunction, h);
      return Expr::pow(base, static_cast<unsigned>(k->get_num().get_ui()));
    }
    if ((h == "real_pi" || h == "pi") && n <= 1) return Expr::pi();
    if ((h == "to_real" || h == "fp.to_real") && n == 1) return expr(s[1]);

    if (h == "fp" && n == 3) return fp_literal(s);
    if (h == "_" && n == 3) return special_literal(s);
    if ((h == "fp.neg" && n == 1)) return -expr(s[1]);
    if ((h == "fp.abs" && n == 1)) return Expr::unary(Op::Abs, expr(s[1]));
    if ((h == "fp.min" || h == "fp.max") && n == 2)
      return Expr::binary(h == "fp.min" ? Op::Min : Op::Max, expr(s[1]), expr(s[2]));
    if ((h == "fp.add" || h == "fp.sub" || h == "fp.mul" || h == "fp.div") && n == 3) {
      RoundMode m = mode(s[1]);
      Expr a = expr(s[2]), b = expr(s[3]);
      FloatKind k = require_format({a, b}, h);
      Op op = h == "fp.add" ? Op::Add : h == "fp.sub" ? Op::Sub : h == "fp.mul" ? Op::Mul : Op::Div;
      return Expr::round_fp(k, m, Expr::binary(op, a, b));
    }
    if (h == "fp.sqrt" && n == 2) {
      RoundMode m = mode(s[1]);
      Expr a = expr(s[2]);
      return Expr::round_fp(require_format({a}, h), m, Expr::unary(Op::Sqrt, a));
    }
    if (h == "fp.fma" && n == 4) {
      RoundMode m = mode(s[1]);
      Expr a = expr(s[2]), b = expr(s[3]), c = expr(s[4]);
      return Expr::round_fp(require_format({a, b, c}, h), m, a * b + c);
    }
    if ((h == "fp.roundToIntegral" || h == "round_int") && n == 2) {
      RoundMode m = mode(s[1]);
      return Expr::round_to_int(m, expr(s[2]));
    }
    if ((h == "rnd32" || h == "rnd64") && n == 2) {
      RoundMode m = mode(s[1]);
      return Expr::round_fp(h == "rnd32" ? FloatKind::Single : FloatKind::Double, m, expr(s[2]));
    }
    if ((h == "to_float" || h == "of_int") && n == 2) {
      RoundMode m = mode(s[1]);
      return Expr::round_fp(conversion_target(h), m, expr(s[2]));
    }
    if (h == "ite") throw TranslateError(DropReason::UnsupportedFunction, "ite");
    return unknown_symbol_expr(h);
  }

  bool is_boolean(const SExpr& s) const {
    if (s.is_atom()) return s.token == "true" || s.token == "false";
    static const std::set<std::string> heads = {
        "not",    "and",    "or",    "=>",    "implies", "=",       "distinct",     "<=",        "<",
        ">=",     ">",      "fp.eq", "fp.leq", "fp.lt",  "fp.geq",  "fp.gt",        "isFiniteFloat", "is_finite",
        "fp.isFinite", "fp.isNaN", "fp.isInfinite", "fp.isZero", "xor"};
    const std::string& h = s.head();
    if (h == "ite" && s.size() == 4) return is_boolean(s[2]);
    return heads.count(h) > 0;
  }

 private:
  static std::optional<Rel> comparison(const std::string& h) {
    if (h == "<=" || h == "fp.leq") return Rel::LE;
    if (h == "<" || h == "fp.lt") return Rel::LT;
    if (h == ">=" || h == "fp.geq") return Rel::GE;
    if (h == ">" || h == "fp.gt") return Rel::GT;
    return std::nullopt;
  }

  static std::optional<Op> transcendental(const std::string& h) {
    static const std::map<std::string, Op> table = {
        {"sin", Op::Sin},       {"cos", Op::Cos},       {"exp", Op::Exp},       {"log", Op::Log},
        {"sqrt", Op::Sqrt},     {"real_sin", Op::Sin},  {"real_cos", Op::Cos},  {"real_exp", Op::Exp},
        {"real_log", Op::Log},  {"real_sqrt", Op::Sqrt}, {"ln", Op::Log}};
    auto it = table.find(h);
    if (it == table.end()) return std::nullopt;
    return it->second;
  }

  Formula chain(Rel rel, const SExpr& s) {
    std::vector<Expr> xs;
    for (std::size_t i = 1; i < s.size(); ++i) xs.push_back(expr(s[i]));
    std::vector<Formula> parts;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) parts.push_back(Formula::atom(rel, xs[i], xs[i + 1]));
    return parts.size() == 1 ? parts[0] : Formula::conj(std::move(parts));
  }

  RoundMode mode(const SExpr& s) {
    std::string t = s.is_atom() ? s.token : to_string(s);
    if (t == "RNE" || t == "roundNearestTiesToEven") return RoundMode::NearestEven;
    if (t == "RNA" || t == "roundNearestTiesToAway") return RoundMode::NearestAway;
    static const std::set<std::string> directed = {"RTZ", "RTP", "RTN", "roundTowardZero", "roundTowardPositive",
                                                   "roundTowardNegative"};
    if (directed.count(t)) throw TranslateError(DropReason::UnsupportedFunction, "rounding mode " + t);
    env_.warnings.push_back("unknown rounding mode '" + t + "', assuming RNE");
    return RoundMode::NearestEven;
  }

  FloatKind require_format(const std::vector<Expr>& operands, const std::string& op) {
    switch (infer_fp_format(operands, env_.vars)) {
      case FpInference::Single: return FloatKind::Single;
      case FpInference::Double: return FloatKind::Double;
      case FpInference::Mixed: throw TranslateError(DropReason::MixedPrecision, op);
      case FpInference::Unknown: break;
    }
    throw TranslateError(DropReason::UnknownSort, op);
  }

  FloatKind conversion_target(const std::string& h) {
    auto it = env_.funs.find(h);
    if (it != env_.funs.end() && it->second && it->second->is_float()) return it->second->format;
    return FloatKind::Single;
  }

  Expr atom_expr(const std::string& raw) {
    std::string t = strip_bars(raw);
    if (!raw.empty() && raw[0] != '|') {
      char c = raw[0];
      if ((c >= '0' && c <= '9') || c == '.' || ((c == '-' || c == '+') && raw.size() > 1)) {
        if (auto v = parse_scalar(raw)) return Expr::lit(*v);
      }
    }
    if (auto it = env_.vars.find(t); it != env_.vars.end()) return Expr::var(t);
    if (t == "real_pi" || t == "pi") return Expr::pi();
    if (raw.size() > 2 && raw[0] == '#') throw TranslateError(DropReason::UnknownSort, raw);  // bare bit-vector
    return unknown_symbol_expr(t);
  }

  Expr fp_literal(const SExpr& s) {
    for (std::size_t i = 1; i <= 3; ++i)
      if (!s[i].is_atom()) throw TranslateError(DropReason::UnsupportedFunction, "fp");
    try {
      auto [v, k] = decode_fp_literal(s[1].token, s[2].token, s[3].token);
      return Expr::lit(v, k);
    } catch (const NonFiniteLiteral& e) {
      throw TranslateError(DropReason::UnsupportedFunction, std::string("fp literal (") + e.what() + ")");
    } catch (const Error& e) {
      throw TranslateError(DropReason::UnknownSort, e.what());
    }
  }

  std::optional<FloatKind> indexed_format(const SExpr& e, const SExpr& s) {
    if (e.is_atom("8") && s.is_atom("24")) return FloatKind::Single;
    if (e.is_atom("11") && s.is_atom("53")) return FloatKind::Double;
    return std::nullopt;
  }

  // (_ +zero 8 24) and friends
  Expr special_literal(const SExpr& s) {
    auto k = indexed_format(s[2], s[3]);
    if (!k) throw TranslateError(DropReason::UnknownSort, to_string(s));
    if (s[1].is_atom("+zero") || s[1].is_atom("-zero")) return Expr::lit(Scalar(0), *k);
    throw TranslateError(DropReason::UnsupportedFunction, to_string(s));
  }

  // ((_ to_fp 8 24) RNE x) or ((_ to_fp 8 24) #x3f800000)
  Expr indexed_application(const SExpr& s) {
    const SExpr& ix = s[0];
    if (ix.size() == 4 && ix[0].is_atom("_") && ix[1].is_atom("to_fp")) {
      auto k = indexed_format(ix[2], ix[3]);
      if (!k) throw TranslateError(DropReason::UnknownSort, to_string(ix));
      if (s.size() == 2 && s[1].is_atom() && !s[1].token.empty() && s[1].token[0] == '#') {
        try {
          int width = 0;
          std::uint64_t w = parse_bits(s[1].token, width);
          const FloatFormat f = FloatFormat::of(*k);
          if (width != 1 + f.exponent_bits + f.mantissa_bits()) throw Error("bit width mismatch");
          return Expr::lit(decode_fp_word(w, f), *k);
        } catch (const NonFiniteLiteral& e) {
          throw TranslateError(DropReason::UnsupportedFunction, e.what());
        } catch (const Error& e) {
          throw TranslateError(DropReason::UnknownSort, e.what());
        }
      }
      if (s.size() == 3) {
        RoundMode m = mode(s[1]);
        return Expr::round_fp(*k, m, expr(s[2]));
      }
    }
    throw TranslateError(DropReason::UnsupportedFunction, to_string(ix));
  }

  [[noreturn]] Formula unknown_symbol(const std::string& name) {
    if (env_.unsupported_vars.count(strip_bars(name))) throw TranslateError(DropReason::UnknownSort, name);
    throw TranslateError(DropReason::UnsupportedFunction, name);
  }
  [[noreturn]] Expr unknown_symbol_expr(const std::string& name) {
    unknown_symbol(name);
  }

  Env& env_;
};

/// Translates the body of one `assert`.
inline Formula translate_assertion(const SExpr& s, Env& env) {
  SExpr expanded = expand_lets(s, env.macros);
  return Translator(env).formula(expanded);
}

inline Expr translate_expr(const SExpr& s, Env& env) {
  SExpr expanded = expand_lets(s, env.macros);
  return Translator(env).expr(expanded);
}

}  // namespace fpvc
