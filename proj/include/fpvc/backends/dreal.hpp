#pragma once

// dReal-dialect SMT-LIB (QF_NRA) export of an exact NVC.

#include <fpvc/core/enclosures.hpp>
#include <fpvc/fp/fptaylor.hpp>

#include <string>

namespace fpvc {

struct DRealOptions {
  unsigned max_digits = 18;  // longest integer (numerator/denominator) dReal is given
  Scalar delta = pow10(-100);
  unsigned pi_digits = 16;   // significant digits of the pi_ enclosure
};

namespace detail {

inline unsigned digit_count(const BigInt& z) { return static_cast<unsigned>(BigInt(abs(z)).get_str().size()); }

inline void check_literal(const Scalar& v, unsigned max_digits, const std::string& backend) {
  unsigned d = std::max(digit_count(v.get_num()), digit_count(v.get_den()));
  if (d > max_digits) throw UnsupportedForBackend(backend, "integer literal with " + std::to_string(d) + " digits");
}

inline Expr pi_as_var(const Expr& e) {
  return transform(e, [](const Expr& n) { return n.op() == Op::Pi ? Expr::var(kPiVar) : n; });
}

inline Interval pi_decimal_enclosure(unsigned digits) {
  Interval p = enclosure::pi(4 * digits + 16);
  return Interval::closed(round_decimal(*p.lo(), false, static_cast<int>(digits)),
                          round_decimal(*p.hi(), true, static_cast<int>(digits)));
}

inline bool uses_pi(const ProcessedNVC& nvc) {
  for (const Formula& f : nvc.assertions)
    if (contains_op(f, Op::Pi)) return true;
  return false;
}

}  // namespace detail

/// Throws UnsupportedForBackend on RoundToInt, rounding points or literals
/// longer than opts.max_digits.
inline std::string export_dreal_smt2(const ProcessedNVC& nvc, const Box& box, const DRealOptions& opts = {}) {
  const std::string backend = "dreal";
  for (const Formula& f : nvc.assertions) {
    if (contains_op(f, Op::RoundToInt)) throw UnsupportedForBackend(backend, "round_int");
    if (has_round_fp(f)) throw UnsupportedForBackend(backend, "floating-point rounding");
    map_exprs(f, [&](const Expr& e) {
      transform(e, [&](const Expr& n) {
        if (n.is_lit()) detail::check_literal(n.value(), opts.max_digits, backend);
        return n;
      });
      return e;
    });
  }
  std::string out = "(set-logic QF_NRA)\n";
  out += "(set-option :precision " + *to_exact_decimal(opts.delta, 400) + ")\n";
  std::vector<std::pair<std::string, Interval>> decls;
  for (const VarSpec& v : nvc.vars) {
    auto it = box.find(v.name);
    decls.emplace_back(v.name, it == box.end() ? v.bounds : it->second);
  }
  if (detail::uses_pi(nvc)) decls.emplace_back(kPiVar, detail::pi_decimal_enclosure(opts.pi_digits));
  for (const auto& [name, iv] : decls) {
    const VarSpec* v = nvc.find(name);
    out += "(declare-fun " + name + " () " + (v && v->sort.is_int() ? "Int" : "Real") + ")\n";
  }
  for (const auto& [name, iv] : decls) {
    if (iv.lo()) {
      detail::check_literal(*iv.lo(), opts.max_digits, backend);
      out += "(assert (<= " + literal_sexpr(*iv.lo()) + " " + name + "))\n";
    }
    if (iv.hi()) {
      detail::check_literal(*iv.hi(), opts.max_digits, backend);
      out += "(assert (<= " + name + " " + literal_sexpr(*iv.hi()) + "))\n";
    }
  }
  for (const Formula& f : nvc.assertions)
    out += "(assert " + to_sexpr(map_exprs(f, detail::pi_as_var)) + ")\n";
  out += "(check-sat)\n(exit)\n";
  return out;
}

}  // namespace fpvc
