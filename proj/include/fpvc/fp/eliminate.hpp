#pragma once

// Replaces every rounded atom side by its exact counterpart widened by the
// context's error bound, in the direction that makes the NVC weaker.

#include <fpvc/fp/error_bound.hpp>
#include <fpvc/fp/fptaylor.hpp>

#include <string>
#include <vector>

namespace fpvc {

class UnboundedContext : public Error {
 public:
  explicit UnboundedContext(const std::string& id) : Error("no error bound for context " + id), id(id) {}
  std::string id;
};

inline constexpr int kBoundDigits = 7;

/// Fills in the internal bound of every context that has none yet. Contexts
/// the engine cannot bound keep an empty bound; their errors are returned.
inline std::vector<std::pair<std::string, std::string>> assign_internal_bounds(std::vector<FPContext>& ctxs, const Box& box,
                                                                                const EvalOptions& opts = {}) {
  std::vector<std::pair<std::string, std::string>> failures;
  for (FPContext& c : ctxs) {
    if (c.bound) continue;
    try {
      // widened to a short decimal so that exports stay readable
      c.bound = round_decimal(compute_error_bound_internal(c, box, opts), true, kBoundDigits);
      c.source = BoundSource::Internal;
    } catch (const ErrorBoundError& e) {
      failures.emplace_back(c.id, e.what());
    }
  }
  return failures;
}

/// Sets an externally computed bound. Returns false when no context has that id.
inline bool inject_bound(std::vector<FPContext>& ctxs, const std::string& id, const Scalar& bound,
                         const std::string& tool = "external", const std::string& raw = {}) {
  for (FPContext& c : ctxs) {
    if (c.id != id) continue;
    c.bound = bound;
    c.source = BoundSource::External;
    c.tool = tool;
    c.raw = raw;
    return true;
  }
  return false;
}

namespace detail {

class Eliminator {
 public:
  explicit Eliminator(const std::vector<FPContext>& ctxs) : ctxs_(ctxs) {}

  Formula run(const Formula& f, bool positive) {
    switch (f.kind()) {
      case FKind::True:
      case FKind::False: return f;
      case FKind::Not: return Formula::negate(run(f.arg(), !positive));
      case FKind::And:
      case FKind::Or: {
        std::vector<Formula> xs;
        for (const Formula& c : f.args()) xs.push_back(run(c, positive));
        return f.with_args(std::move(xs));
      }
      case FKind::Implies: return Formula::implies(run(f.arg(0), !positive), run(f.arg(1), positive));
      case FKind::Atom: return atom(f, positive);
    }
    return f;
  }

 private:
  const FPContext& lookup(const Expr& side) const {
    for (const FPContext& c : ctxs_)
      if (c.expr == side) {
        if (!c.bound) throw UnboundedContext(c.id);
        return c;
      }
    throw UnboundedContext(context_id(side));
  }

  // exact(side) + sign * delta
  Expr widen(const Expr& side, int sign) const {
    if (!side.has_round_fp()) return side;
    const FPContext& c = lookup(side);
    if (*c.bound == 0) return c.exact;
    Expr d = Expr::lit(*c.bound);
    return sign > 0 ? c.exact + d : c.exact - d;
  }

  Formula atom(const Formula& f, bool positive) const {
    Expr l = f.lhs(), r = f.rhs();
    if (!l.has_round_fp() && !r.has_round_fp()) return f;
    Rel rel = f.rel();
    if (rel == Rel::GE || rel == Rel::GT) {
      std::swap(l, r);
      rel = rel == Rel::GE ? Rel::LE : Rel::LT;
    }
    if (rel == Rel::EQ) {
      bool exact = (!l.has_round_fp() || *lookup(l).bound == 0) && (!r.has_round_fp() || *lookup(r).bound == 0);
      if (exact) return Formula::eq(widen(l, 0), widen(r, 0));
      return Formula::conj({atom(Formula::le(l, r), positive), atom(Formula::le(r, l), positive)});
    }
    // positive: the smaller side may be as low as exact - d, the larger as high as exact + d
    int s = positive ? 1 : -1;
    return Formula::atom(rel, widen(l, -s), widen(r, s));
  }

  const std::vector<FPContext>& ctxs_;
};

}  // namespace detail

/// Eliminates all rounding points. Every context occurring in the NVC must
/// carry a bound (UnboundedContext otherwise). Float variables become real.
inline ProcessedNVC eliminate_fp(ProcessedNVC nvc, const std::vector<FPContext>& ctxs) {
  std::uint64_t before = nvc.content_hash();
  detail::Eliminator el(ctxs);
  for (Formula& a : nvc.assertions) a = el.run(a, true);
  for (VarSpec& v : nvc.vars)
    if (v.sort.is_float()) v.sort = Sort::real();
  nvc.record("eliminate-fp", before);
  return nvc;
}

}  // namespace fpvc
