#pragma once

// First-order propagation of absolute rounding-error bounds. Each node yields
// (V, E): V encloses the exact value (rounding points stripped) and E bounds
// the distance between the rounded and the exact value.

#include <fpvc/core/eval.hpp>
#include <fpvc/fp/context.hpp>

#include <string>
#include <unordered_map>

namespace fpvc {

class ErrorBoundError : public Error {
 public:
  enum class Kind { UnboundedVariable, DenominatorMayVanish, DomainError, PossibleOverflow };
  ErrorBoundError(Kind kind, const std::string& detail) : Error(name(kind) + ": " + detail), kind(kind) {}
  static std::string name(Kind k) {
    switch (k) {
      case Kind::UnboundedVariable: return "UnboundedVariable";
      case Kind::DenominatorMayVanish: return "DenominatorMayVanish";
      case Kind::DomainError: return "DomainError";
      case Kind::PossibleOverflow: return "PossibleOverflow";
    }
    return "?";
  }
  Kind kind;
};

struct ValueError {
  Interval value;  // exact value
  Scalar error;    // |rounded - exact| <= error
};

class ErrorPropagator {
 public:
  ErrorPropagator(const Box& box, const EvalOptions& opts) : box_(box), opts_(opts) {}

  ValueError run(const Expr& e) {
    auto it = memo_.find(e.node());
    if (it != memo_.end()) return it->second;
    ValueError r = compute(e);
    memo_.emplace(e.node(), r);
    return r;
  }

 private:
  using K = ErrorBoundError::Kind;

  static Scalar mag(const Interval& v, const Expr& at) {
    auto m = v.magnitude();
    if (!m) throw ErrorBoundError(K::UnboundedVariable, "unbounded intermediate value in " + to_sexpr(at));
    return *m;
  }

  // the interval the rounded value lies in
  static Interval actual(const ValueError& x) { return x.value.inflate(x.error); }

  Interval sqrt_of(const Scalar& q) { return enclosure::sqrt(Interval::point(q), opts_.prec); }

  ValueError compute(const Expr& e) {
    unsigned prec = opts_.prec;
    switch (e.op()) {
      case Op::Var: {
        auto it = box_.find(e.name());
        if (it == box_.end() || !it->second.bounded()) throw ErrorBoundError(K::UnboundedVariable, e.name());
        return {it->second, Scalar(0)};
      }
      case Op::Lit: return {Interval::point(e.value()), Scalar(0)};
      case Op::Pi: return {enclosure::pi(prec), Scalar(0)};
      case Op::Neg: {
        ValueError a = run(e.arg());
        return {-a.value, a.error};
      }
      case Op::Abs: {
        ValueError a = run(e.arg());
        return {abs(a.value), a.error};
      }
      case Op::Add:
      case Op::Sub: {
        ValueError a = run(e.arg(0)), b = run(e.arg(1));
        return {e.op() == Op::Add ? a.value + b.value : a.value - b.value, a.error + b.error};
      }
      case Op::Mul: {
        ValueError a = run(e.arg(0)), b = run(e.arg(1));
        Interval v = e.arg(0) == e.arg(1) ? pow(a.value, 2) : a.value * b.value;
        Scalar err = mag(a.value, e) * b.error + mag(b.value, e) * a.error + a.error * b.error;
        return {v, err};
      }
      case Op::Div: {
        ValueError a = run(e.arg(0)), b = run(e.arg(1));
        Interval jb = actual(b);
        if (jb.contains_zero()) throw ErrorBoundError(K::DenominatorMayVanish, to_sexpr(e.arg(1)));
        Scalar err(0);
        if (a.error != 0 || b.error != 0)
          err = (a.error * mag(b.value, e) + mag(a.value, e) * b.error) / (b.value.mignitude() * jb.mignitude());
        return {a.value / b.value, err};
      }
      case Op::Sqrt: {
        ValueError a = run(e.arg());
        Interval j = actual(a);
        if (!j.lo() || *j.lo() < 0) throw ErrorBoundError(K::DomainError, "sqrt of possibly negative " + to_sexpr(e.arg()));
        Interval v = enclosure::sqrt(a.value, prec);
        if (a.error == 0) return {v, Scalar(0)};
        // |sqrt(a') - sqrt(a)| <= sqrt(|a' - a|), and <= |a' - a| / (2 sqrt(min)) away from zero
        Scalar err = *sqrt_of(a.error).hi();
        if (*j.lo() > 0) {
          Scalar s = *sqrt_of(*j.lo()).lo();
          if (s > 0) err = std::min(err, Scalar(a.error / (2 * s)));
        }
        return {v, err};
      }
      case Op::Sin:
      case Op::Cos: {
        ValueError a = run(e.arg());
        Interval v = e.op() == Op::Sin ? enclosure::sin(a.value, prec) : enclosure::cos(a.value, prec);
        return {v, std::min(a.error, Scalar(2))};
      }
      case Op::Exp: {
        ValueError a = run(e.arg());
        Interval j = actual(a);
        Interval ej = enclosure::exp(j, prec);
        if (!ej.hi()) throw ErrorBoundError(K::PossibleOverflow, to_sexpr(e));
        return {enclosure::exp(a.value, prec), *ej.hi() * a.error};
      }
      case Op::Log: {
        ValueError a = run(e.arg());
        Interval j = actual(a);
        if (!j.lo() || *j.lo() <= 0) throw ErrorBoundError(K::DomainError, "log of possibly non-positive " + to_sexpr(e.arg()));
        return {enclosure::log(a.value, prec), a.error / *j.lo()};
      }
      case Op::Min:
      case Op::Max: {
        ValueError a = run(e.arg(0)), b = run(e.arg(1));
        Interval v = e.op() == Op::Min ? min(a.value, b.value) : max(a.value, b.value);
        return {v, std::max(a.error, b.error)};
      }
      case Op::Pow: {
        ValueError a = run(e.arg());
        unsigned n = e.exponent();
        Interval v = pow(a.value, n);
        if (n == 0 || a.error == 0) return {v, Scalar(0)};
        Scalar m = mag(actual(a), e);
        Scalar k(n);
        for (unsigned i = 1; i < n; ++i) k *= m;
        return {v, k * a.error};
      }
      case Op::Mod: {
        ValueError a = run(e.arg(0)), b = run(e.arg(1));
        Interval jb = actual(b);
        if (jb.contains_zero()) throw ErrorBoundError(K::DenominatorMayVanish, to_sexpr(e.arg(1)));
        Interval v = mod_interval(a.value, b.value);
        Scalar cap = mag(jb, e);  // both results lie in [0, |d|)
        if (b.error == 0 && b.value.is_point()) {
          Interval ja = actual(a);
          Scalar m = abs_of(*b.value.lo());
          if (ja.bounded() && floor_of(*ja.lo() / m) == floor_of(*ja.hi() / m)) return {v, std::min(a.error, cap)};
        }
        return {v, cap};
      }
      case Op::RoundToInt: {
        ValueError a = run(e.arg());
        Interval v = round_to_int_interval(a.value, e.mode());
        Interval j = actual(a);
        if (j.bounded() && round_nearest(*j.lo(), e.mode()) == round_nearest(*j.hi(), e.mode())) return {v, Scalar(0)};
        return {v, a.error + 1};
      }
      case Op::RoundFP: {
        const FloatFormat& f = opts_.formats[e.format()];
        const Expr& arg = e.arg();
        if (arg.is_lit() && is_representable(arg.value(), f)) return {Interval::point(arg.value()), Scalar(0)};
        ValueError a = run(arg);
        Scalar m = mag(actual(a), e);
        if (m > f.max_finite) throw ErrorBoundError(K::PossibleOverflow, to_sexpr(e));
        return {a.value, a.error + f.eps * m + f.zeta};
      }
    }
    throw ErrorBoundError(K::DomainError, "unknown node");
  }

  const Box& box_;
  const EvalOptions& opts_;
  std::unordered_map<const Expr::Node*, ValueError> memo_;
};

/// Sound absolute bound on |expr - exact| over the box.
inline Scalar compute_error_bound_internal(const FPContext& ctx, const Box& box, const EvalOptions& opts = {}) {
  ErrorPropagator p(box, opts);
  return p.run(ctx.expr).error;
}

}  // namespace fpvc
