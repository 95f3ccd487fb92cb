#pragma once

// Interval evaluation of expressions and three-valued evaluation of formulas.

#include <fpvc/core/enclosures.hpp>
#include <fpvc/core/formula.hpp>
#include <fpvc/core/interval.hpp>

#include <unordered_map>
#include <vector>

namespace fpvc {

struct EvalOptions {
  unsigned prec = 113;
  FormatTable formats;
  // round to the nearest float (point-exact) instead of the eps/zeta model
  bool exact_rounding = false;
};

enum class Truth : unsigned char { CertainlyTrue, CertainlyFalse, Unknown };

inline const char* to_string(Truth t) {
  switch (t) {
    case Truth::CertainlyTrue: return "CertainlyTrue";
    case Truth::CertainlyFalse: return "CertainlyFalse";
    case Truth::Unknown: return "Unknown";
  }
  return "?";
}

inline Truth truth_not(Truth t) {
  if (t == Truth::CertainlyTrue) return Truth::CertainlyFalse;
  if (t == Truth::CertainlyFalse) return Truth::CertainlyTrue;
  return Truth::Unknown;
}

/// Nearest integer to q; ties resolved by mode.
inline BigInt round_nearest(const Scalar& q, RoundMode mode) {
  BigInt f = floor_of(q);
  Scalar r = q - Scalar(f);
  static const Scalar half(1, 2);
  if (r > half) return f + 1;
  if (r < half) return f;
  if (mode == RoundMode::NearestEven) return mpz_even_p(f.get_mpz_t()) ? f : BigInt(f + 1);
  return q > 0 ? BigInt(f + 1) : f;
}

/// floor(log2 |q|) for q != 0.
inline long ilog2(const Scalar& q) {
  Scalar a = abs_of(q);
  long e = static_cast<long>(mpz_sizeinbase(a.get_num().get_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(a.get_den().get_mpz_t(), 2));
  if (pow2(e) > a) --e;
  else if (pow2(e + 1) <= a) ++e;
  return e;
}

/// The float nearest to q, or nullopt on overflow.
inline std::optional<Scalar> round_to_format(const Scalar& q, const FloatFormat& f, RoundMode mode) {
  if (q == 0) return Scalar(0);
  long e = std::max<long>(ilog2(q), f.emin);
  Scalar ulp = pow2(e - (f.precision - 1));
  Scalar r = Scalar(round_nearest(q / ulp, mode)) * ulp;
  if (abs_of(r) > f.max_finite) return std::nullopt;
  return r;
}

/// Euclidean remainder: result in [0, |d|).
inline Scalar euclid_mod(const Scalar& a, const Scalar& d) {
  Scalar m = abs_of(d);
  return a - m * Scalar(floor_of(a / m));
}

inline Interval round_fp_interval(const Interval& a, const FloatFormat& f) {
  Interval rel = Interval::closed(1 - f.eps, 1 + f.eps);
  return (a * rel).inflate(f.zeta);
}

inline Interval round_to_int_interval(const Interval& a, RoundMode mode) {
  // rounding to nearest is monotone, so the endpoint images give the hull
  std::optional<Scalar> lo, hi;
  if (a.lo()) lo = Scalar(round_nearest(*a.lo(), mode));
  if (a.hi()) hi = Scalar(round_nearest(*a.hi(), mode));
  return {std::move(lo), std::move(hi)};
}

inline Interval mod_interval(const Interval& a, const Interval& d) {
  if (d.contains_zero()) return Interval::entire();
  if (d.is_point()) {
    Scalar m = abs_of(*d.lo());
    if (a.bounded()) {
      BigInt k1 = floor_of(*a.lo() / m), k2 = floor_of(*a.hi() / m);
      if (k1 == k2) return Interval::closed(*a.lo() - m * Scalar(k1), *a.hi() - m * Scalar(k1));
    }
    return Interval::closed(Scalar(0), m);
  }
  auto mag = d.magnitude();
  if (!mag) return {Scalar(0), std::nullopt};
  return Interval::closed(Scalar(0), *mag);
}

/// Memoizing evaluator for one box. Not thread-safe; create one per thread.
class Evaluator {
 public:
  Evaluator(const Box& box, const EvalOptions& opts) : box_(box), opts_(opts) {}

  const EvalOptions& options() const { return opts_; }

  Interval eval(const Expr& e) {
    auto it = memo_.find(e.node());
    if (it != memo_.end()) return it->second;
    Interval r = compute(e);
    memo_.emplace(e.node(), r);
    return r;
  }

  Truth eval(const Formula& f) {
    switch (f.kind()) {
      case FKind::True: return Truth::CertainlyTrue;
      case FKind::False: return Truth::CertainlyFalse;
      case FKind::Atom: return compare(f.rel(), eval(f.lhs()), eval(f.rhs()));
      case FKind::Not: return truth_not(eval(f.arg()));
      case FKind::And: {
        Truth acc = Truth::CertainlyTrue;
        for (const Formula& c : f.args()) {
          Truth t = eval(c);
          if (t == Truth::CertainlyFalse) return t;
          if (t == Truth::Unknown) acc = Truth::Unknown;
        }
        return acc;
      }
      case FKind::Or: {
        Truth acc = Truth::CertainlyFalse;
        for (const Formula& c : f.args()) {
          Truth t = eval(c);
          if (t == Truth::CertainlyTrue) return t;
          if (t == Truth::Unknown) acc = Truth::Unknown;
        }
        return acc;
      }
      case FKind::Implies: {
        Truth a = eval(f.arg(0));
        if (a == Truth::CertainlyFalse) return Truth::CertainlyTrue;
        Truth b = eval(f.arg(1));
        if (b == Truth::CertainlyTrue) return b;
        if (a == Truth::CertainlyTrue) return b;
        return Truth::Unknown;
      }
    }
    return Truth::Unknown;
  }

  /// a REL b decided over intervals. Non-strict relations accept touching
  /// endpoints; strict ones need a gap.
  static Truth compare(Rel rel, const Interval& a, const Interval& b) {
    switch (rel) {
      case Rel::GE: return compare(Rel::LE, b, a);
      case Rel::GT: return compare(Rel::LT, b, a);
      case Rel::LE:
        if (a.hi() && b.lo() && *a.hi() <= *b.lo()) return Truth::CertainlyTrue;
        if (a.lo() && b.hi() && *a.lo() > *b.hi()) return Truth::CertainlyFalse;
        return Truth::Unknown;
      case Rel::LT:
        if (a.hi() && b.lo() && *a.hi() < *b.lo()) return Truth::CertainlyTrue;
        if (a.lo() && b.hi() && *a.lo() >= *b.hi()) return Truth::CertainlyFalse;
        return Truth::Unknown;
      case Rel::EQ:
        if (a.is_point() && b.is_point() && *a.lo() == *b.lo()) return Truth::CertainlyTrue;
        if ((a.lo() && b.hi() && *a.lo() > *b.hi()) || (b.lo() && a.hi() && *b.lo() > *a.hi()))
          return Truth::CertainlyFalse;
        return Truth::Unknown;
    }
    return Truth::Unknown;
  }

 private:
  Interval compute(const Expr& e) {
    unsigned prec = opts_.prec;
    switch (e.op()) {
      case Op::Var: {
        auto it = box_.find(e.name());
        return it == box_.end() ? Interval::entire() : it->second;
      }
      case Op::Lit: return Interval::point(e.value());
      case Op::Pi: return enclosure::pi(prec);
      case Op::Neg: return -eval(e.arg());
      case Op::Abs: return abs(eval(e.arg()));
      case Op::Sqrt: return enclosure::sqrt(eval(e.arg()), prec);
      case Op::Sin: return enclosure::sin(eval(e.arg()), prec);
      case Op::Cos: return enclosure::cos(eval(e.arg()), prec);
      case Op::Exp: return enclosure::exp(eval(e.arg()), prec);
      case Op::Log: return enclosure::log(eval(e.arg()), prec);
      case Op::Add: return eval(e.arg(0)) + eval(e.arg(1));
      case Op::Sub: return eval(e.arg(0)) - eval(e.arg(1));
      case Op::Mul: {
        // x*x is a square, not a product of independent factors
        if (e.arg(0) == e.arg(1)) return pow(eval(e.arg(0)), 2);
        return eval(e.arg(0)) * eval(e.arg(1));
      }
      case Op::Div: return eval(e.arg(0)) / eval(e.arg(1));
      case Op::Min: return min(eval(e.arg(0)), eval(e.arg(1)));
      case Op::Max: return max(eval(e.arg(0)), eval(e.arg(1)));
      case Op::Mod: return mod_interval(eval(e.arg(0)), eval(e.arg(1)));
      case Op::Pow: return pow(eval(e.arg()), e.exponent());
      case Op::RoundFP: {
        Interval a = eval(e.arg());
        const FloatFormat& f = opts_.formats[e.format()];
        if (opts_.exact_rounding && a.bounded()) {
          // rounding is monotone
          auto lo = round_to_format(*a.lo(), f, e.mode());
          auto hi = round_to_format(*a.hi(), f, e.mode());
          if (lo && hi) return Interval::closed(*lo, *hi);
        }
        return round_fp_interval(a, f);
      }
      case Op::RoundToInt: return round_to_int_interval(eval(e.arg()), e.mode());
    }
    return Interval::entire();
  }

  const Box& box_;
  const EvalOptions& opts_;
  std::unordered_map<const Expr::Node*, Interval> memo_;
};

inline Interval eval_expr_interval(const Expr& e, const Box& box, const EvalOptions& opts) {
  Evaluator ev(box, opts);
  return ev.eval(e);
}

inline Interval eval_expr_interval(const Expr& e, const Box& box, unsigned prec = 113) {
  EvalOptions opts;
  opts.prec = prec;
  return eval_expr_interval(e, box, opts);
}

inline Truth eval_formula_interval(const Formula& f, const Box& box, const EvalOptions& opts) {
  Evaluator ev(box, opts);
  return ev.eval(f);
}

inline Truth eval_formula_interval(const Formula& f, const Box& box, unsigned prec = 113) {
  EvalOptions opts;
  opts.prec = prec;
  return eval_formula_interval(f, box, opts);
}

/// Truth of the implicit conjunction of a list of assertions.
inline Truth eval_conjunction(const std::vector<Formula>& fs, const Box& box, const EvalOptions& opts) {
  Evaluator ev(box, opts);
  Truth acc = Truth::CertainlyTrue;
  for (const Formula& f : fs) {
    Truth t = ev.eval(f);
    if (t == Truth::CertainlyFalse) return t;
    if (t == Truth::Unknown) acc = Truth::Unknown;
  }
  return acc;
}

}  // namespace fpvc
