#pragma once

// Variable bound derivation by iterated interval evaluation, and pruning of
// interval-decidable atoms.

#include <fpvc/core/eval.hpp>
#include <fpvc/simplifier/simplify.hpp>

#include <string>
#include <vector>

namespace fpvc {

class EmptyBox : public Error {
 public:
  explicit EmptyBox(std::string var) : Error("bounds of " + var + " are empty"), var(std::move(var)) {}
  std::string var;
};

struct BoundsResult {
  Box box;
  unsigned rounds = 0;
  bool converged = false;
};

inline constexpr unsigned kMaxBoundRounds = 20;

namespace detail {

// v <= e, e <= v or v = e with v not occurring in e
struct BoundAtom {
  Rel rel;  // LE or EQ after normalisation (strict relations are closed)
  Expr lhs, rhs;
};

inline void collect_bound_atoms(const Formula& f, bool positive, std::vector<BoundAtom>& out) {
  if (f.kind() == FKind::And && positive) {
    for (const Formula& c : f.args()) collect_bound_atoms(c, positive, out);
    return;
  }
  if (f.kind() == FKind::Or && !positive) {
    for (const Formula& c : f.args()) collect_bound_atoms(c, positive, out);
    return;
  }
  if (f.kind() == FKind::Not) {
    collect_bound_atoms(f.arg(), !positive, out);
    return;
  }
  if (!f.is_atom()) return;
  Expr l = f.lhs(), r = f.rhs();
  switch (f.rel()) {
    case Rel::GE:
    case Rel::GT: std::swap(l, r); [[fallthrough]];
    case Rel::LE:
    case Rel::LT:
      // not (l <= r) means r < l
      if (positive) out.push_back({Rel::LE, l, r});
      else out.push_back({Rel::LE, r, l});
      return;
    case Rel::EQ:
      if (positive) out.push_back({Rel::EQ, l, r});
      return;
  }
}

inline bool improves(const std::optional<Scalar>& before, const std::optional<Scalar>& after) {
  if (!after) return false;
  if (!before) return true;
  Scalar diff = abs_of(*after - *before);
  Scalar scale = std::max(abs_of(*before), abs_of(*after));
  return diff * 1000000 > scale;
}

class BoxRefiner {
 public:
  BoxRefiner(Box& box, const ProcessedNVC& nvc, const EvalOptions& opts) : box_(box), nvc_(nvc), opts_(opts) {}

  void apply(const BoundAtom& a) {
    if (a.lhs.is_var() && !mentions(a.rhs, a.lhs.name())) {
      Interval r = eval(a.rhs);
      if (a.rel == Rel::EQ) meet(a.lhs.name(), r);
      else meet(a.lhs.name(), Interval(std::nullopt, r.hi()));
    }
    if (a.rhs.is_var() && !mentions(a.lhs, a.rhs.name())) {
      Interval l = eval(a.lhs);
      if (a.rel == Rel::EQ) meet(a.rhs.name(), l);
      else meet(a.rhs.name(), Interval(l.lo(), std::nullopt));
    }
    // |v - e| <= c  or  |e - v| <= c
    if (a.rel == Rel::LE && a.lhs.op() == Op::Abs && a.lhs.arg().op() == Op::Sub) {
      const Expr& d = a.lhs.arg();
      for (int side = 0; side < 2; ++side) {
        const Expr& v = d.arg(side);
        const Expr& e = d.arg(1 - side);
        if (!v.is_var() || mentions(e, v.name()) || mentions(a.rhs, v.name())) continue;
        Interval ei = eval(e);
        Interval c = eval(a.rhs);
        if (!c.hi()) continue;
        std::optional<Scalar> lo, hi;
        if (ei.lo()) lo = *ei.lo() - *c.hi();
        if (ei.hi()) hi = *ei.hi() + *c.hi();
        meet(v.name(), Interval(lo, hi));
      }
    }
  }

 private:
  Interval eval(const Expr& e) { return eval_expr_interval(e, box_, opts_); }

  static bool long_fraction(const Scalar& q) { return mpz_sizeinbase(q.get_den().get_mpz_t(), 2) > 64; }

  void meet(const std::string& name, const Interval& bound) {
    auto it = box_.find(name);
    if (it == box_.end()) return;
    auto r = it->second.intersect(bound);
    if (!r) throw EmptyBox(name);
    std::optional<Scalar> lo = r->lo(), hi = r->hi();
    // enclosure endpoints can carry huge denominators; widen them to short decimals
    if (lo && long_fraction(*lo)) lo = round_decimal(*lo, false, 17);
    if (hi && long_fraction(*hi)) hi = round_decimal(*hi, true, 17);
    if (lo && it->second.lo() && *lo < *it->second.lo()) lo = it->second.lo();
    if (hi && it->second.hi() && *hi > *it->second.hi()) hi = it->second.hi();
    const VarSpec* spec = nvc_.find(name);
    if (spec && spec->sort.is_int()) {
      if (lo) lo = Scalar(ceil_of(*lo));
      if (hi) hi = Scalar(floor_of(*hi));
      if (lo && hi && *lo > *hi) throw EmptyBox(name);
    }
    it->second = Interval(lo, hi);
  }

  Box& box_;
  const ProcessedNVC& nvc_;
  const EvalOptions& opts_;
};

}  // namespace detail

/// Starting from the declared bounds, intersects each variable with the
/// interval value of the other side of every atom that isolates it.
inline BoundsResult derive_bounds(const ProcessedNVC& nvc, const EvalOptions& opts = {},
                                  unsigned max_rounds = kMaxBoundRounds) {
  BoundsResult res;
  res.box = nvc.box();
  for (const VarSpec& v : nvc.vars) {
    if (!v.sort.is_int()) continue;
    Interval& b = res.box[v.name];
    std::optional<Scalar> lo = b.lo(), hi = b.hi();
    if (lo) lo = Scalar(ceil_of(*lo));
    if (hi) hi = Scalar(floor_of(*hi));
    if (lo && hi && *lo > *hi) throw EmptyBox(v.name);
    b = Interval(lo, hi);
  }
  std::vector<detail::BoundAtom> atoms;
  for (const Formula& f : nvc.assertions) detail::collect_bound_atoms(f, true, atoms);
  for (const auto& [name, rhs] : nvc.definitions) atoms.push_back({Rel::EQ, Expr::var(name), rhs});
  detail::BoxRefiner refiner(res.box, nvc, opts);
  while (res.rounds < max_rounds) {
    ++res.rounds;
    Box before = res.box;
    for (const auto& a : atoms) refiner.apply(a);
    bool improved = false;
    for (const auto& [name, iv] : res.box) {
      const Interval& old = before.at(name);
      if (detail::improves(old.lo(), iv.lo()) || detail::improves(old.hi(), iv.hi())) improved = true;
    }
    if (!improved) {
      res.converged = true;
      break;
    }
  }
  return res;
}

/// Replaces every atom decided over the box by true/false, then re-simplifies.
inline ProcessedNVC prune_with_bounds(ProcessedNVC nvc, const Box& box, const EvalOptions& opts = {}) {
  std::uint64_t before = nvc.content_hash();
  Evaluator ev(box, opts);
  for (Formula& a : nvc.assertions) {
    a = transform(a, [&](const Formula& f) {
      if (!f.is_atom()) return f;
      Truth t = ev.eval(f);
      if (t == Truth::Unknown) return f;
      return Formula::truth(t == Truth::CertainlyTrue);
    });
  }
  nvc.record("prune", before);
  return simplify_fixpoint(std::move(nvc), opts);
}

inline constexpr unsigned kMaxProcessIterations = 20;

/// simplify, derive bounds, prune; repeated until nothing changes. The
/// derived box is stored in the variable specs. Throws EmptyBox.
inline ProcessedNVC simplify_and_bound(ProcessedNVC nvc, const EvalOptions& opts = {},
                                       unsigned max_rounds = kMaxBoundRounds) {
  nvc = simplify_fixpoint(std::move(nvc), opts);
  for (unsigned it = 0; it < kMaxProcessIterations; ++it) {
    std::uint64_t h = nvc.content_hash();
    BoundsResult b = derive_bounds(nvc, opts, max_rounds);
    nvc.set_box(b.box);
    nvc.record("bounds", h);
    nvc = prune_with_bounds(std::move(nvc), b.box, opts);
    if (nvc.content_hash() == h) break;
  }
  return nvc;
}

inline bool is_trivially_false(const ProcessedNVC& nvc) {
  for (const Formula& f : nvc.assertions)
    if (f.is_false()) return true;
  return false;
}

}  // namespace fpvc
