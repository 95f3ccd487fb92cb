#pragma once

// Symbolic clean-up: boolean reduction, definition substitution and
// arithmetic rewrites, iterated to a fixpoint.

#include <fpvc/core/eval.hpp>
#include <fpvc/core/nvc.hpp>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace fpvc {

/// No operation whose definedness depends on its arguments (x/0, log 0, ...).
inline bool is_total(const Expr& e) {
  switch (e.op()) {
    case Op::Div:
    case Op::Log:
    case Op::Sqrt: return false;
    case Op::Mod:
      if (!(e.arg(1).is_lit() && e.arg(1).value() != 0)) return false;
      break;
    default: break;
  }
  for (const Expr& c : e.args())
    if (!is_total(c)) return false;
  return true;
}

namespace detail {

inline Expr fold_node(const Expr& e) {
  const auto& a = e.args();
  auto lit = [](const Scalar& v) { return Expr::lit(v); };
  switch (e.op()) {
    case Op::Neg:
      if (a[0].is_lit()) return lit(-a[0].value());
      if (a[0].op() == Op::Neg) return a[0].arg();
      return e;
    case Op::Abs:
      if (a[0].is_lit()) return lit(abs_of(a[0].value()));
      return e;
    case Op::Add:
      if (a[0].is_lit() && a[1].is_lit()) return lit(a[0].value() + a[1].value());
      if (a[1].is_lit(0)) return a[0];
      if (a[0].is_lit(0)) return a[1];
      return e;
    case Op::Sub:
      if (a[0].is_lit() && a[1].is_lit()) return lit(a[0].value() - a[1].value());
      if (a[1].is_lit(0)) return a[0];
      return e;
    case Op::Mul:
      if (a[0].is_lit() && a[1].is_lit()) return lit(a[0].value() * a[1].value());
      if (a[1].is_lit(1)) return a[0];
      if (a[0].is_lit(1)) return a[1];
      if ((a[1].is_lit(0) && is_total(a[0])) || (a[0].is_lit(0) && is_total(a[1]))) return lit(Scalar(0));
      return e;
    case Op::Div:
      if (a[0].is_lit() && a[1].is_lit() && a[1].value() != 0) return lit(a[0].value() / a[1].value());
      if (a[1].is_lit(1)) return a[0];
      return e;
    case Op::Min:
    case Op::Max:
      if (a[0] == a[1]) return a[0];
      if (a[0].is_lit() && a[1].is_lit()) {
        bool first = e.op() == Op::Min ? a[0].value() <= a[1].value() : a[0].value() >= a[1].value();
        return first ? a[0] : a[1];
      }
      return e;
    case Op::Mod:
      if (a[0].is_lit() && a[1].is_lit() && a[1].value() != 0) return lit(euclid_mod(a[0].value(), a[1].value()));
      return e;
    case Op::Pow:
      if (e.exponent() == 1) return a[0];
      if (a[0].is_lit()) {
        Scalar r(1);
        for (unsigned i = 0; i < e.exponent(); ++i) r *= a[0].value();
        return lit(r);
      }
      return e;
    case Op::RoundToInt:
      if (a[0].is_lit()) return lit(Scalar(round_nearest(a[0].value(), e.mode())));
      return e;
    default: return e;  // rounding points of literals are kept: they carry an error bound of their own
  }
}

inline std::optional<bool> compare_literals(Rel rel, const Scalar& x, const Scalar& y) {
  switch (rel) {
    case Rel::LE: return x <= y;
    case Rel::LT: return x < y;
    case Rel::GE: return x >= y;
    case Rel::GT: return x > y;
    case Rel::EQ: return x == y;
  }
  return std::nullopt;
}

inline Formula simplify_atom(const Formula& f) {
  Rel rel = f.rel();
  Expr l = f.lhs(), r = f.rhs();
  if (l.is_lit() && r.is_lit()) return Formula::truth(*compare_literals(rel, l.value(), r.value()));
  if (l == r) return Formula::truth(rel != Rel::LT && rel != Rel::GT);
  // e >= c is written c <= e
  if (rel == Rel::GE) return Formula::le(r, l);
  if (rel == Rel::GT) return Formula::lt(r, l);
  return f;
}

inline void push_unique(std::vector<Formula>& xs, const Formula& f) {
  for (const Formula& g : xs)
    if (g == f) return;
  xs.push_back(f);
}

inline Formula simplify_node(const Formula& f) {
  switch (f.kind()) {
    case FKind::True:
    case FKind::False: return f;
    case FKind::Atom: return simplify_atom(f);
    case FKind::Not: {
      const Formula& a = f.arg();
      if (a.is_true()) return Formula::truth(false);
      if (a.is_false()) return Formula::truth(true);
      if (a.kind() == FKind::Not) return a.arg();
      return f;
    }
    case FKind::And:
    case FKind::Or: {
      bool is_and = f.kind() == FKind::And;
      std::vector<Formula> xs;
      for (const Formula& c : f.args()) {
        if (c.kind() == f.kind()) {
          for (const Formula& g : c.args()) push_unique(xs, g);
          continue;
        }
        if (c.is_true() || c.is_false()) {
          if (c.is_true() != is_and) return c;  // annihilator
          continue;                               // identity
        }
        push_unique(xs, c);
      }
      if (xs.empty()) return Formula::truth(is_and);
      if (xs.size() == 1) return xs[0];
      return is_and ? Formula::conj(std::move(xs)) : Formula::disj(std::move(xs));
    }
    case FKind::Implies: {
      const Formula& a = f.arg(0);
      const Formula& b = f.arg(1);
      if (a.is_true()) return b;
      if (a.is_false() || b.is_true() || a == b) return Formula::truth(true);
      if (b.is_false()) return simplify_node(Formula::negate(a));
      return f;
    }
  }
  return f;
}

}  // namespace detail

inline Expr simplify_arith(const Expr& e) { return transform(e, detail::fold_node); }

inline Formula simplify_bool(const Formula& f) { return transform(f, detail::simplify_node); }

/// Both rewrites on one formula.
inline Formula simplify_formula(const Formula& f) {
  return simplify_bool(map_exprs(f, [](const Expr& e) { return simplify_arith(e); }));
}

/// Syntactically integer-valued for every integer assignment of the Int variables.
inline bool is_integer_valued(const Expr& e, const ProcessedNVC& nvc) {
  switch (e.op()) {
    case Op::Lit: return is_integer(e.value());
    case Op::Var: {
      const VarSpec* v = nvc.find(e.name());
      return v && v->sort.is_int();
    }
    case Op::RoundToInt: return true;
    case Op::Neg:
    case Op::Abs:
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Min:
    case Op::Max:
    case Op::Mod:
    case Op::Pow:
      for (const Expr& c : e.args())
        if (!is_integer_valued(c, nvc)) return false;
      return true;
    default: return false;
  }
}

namespace detail {

struct Definition {
  std::string var;
  Expr rhs;
  std::string printed;
};

inline std::optional<Definition> as_definition(const Expr& side, const Expr& other, const ProcessedNVC& nvc) {
  if (!side.is_var()) return std::nullopt;
  const VarSpec* v = nvc.find(side.name());
  if (!v || mentions(other, side.name())) return std::nullopt;
  if (v->sort.is_int() && !is_integer_valued(other, nvc)) return std::nullopt;
  return Definition{side.name(), other, to_sexpr(other)};
}

// The first variable (in assertion order) having a definition, with its shortest one.
inline std::optional<Definition> pick_definition(const ProcessedNVC& nvc) {
  std::vector<Definition> all;
  for (const Formula& a : nvc.assertions) {
    std::vector<Formula> conj;
    flatten_conjuncts(a, conj);
    for (const Formula& c : conj) {
      if (!c.is_atom() || c.rel() != Rel::EQ || c.lhs() == c.rhs()) continue;
      if (auto d = as_definition(c.lhs(), c.rhs(), nvc)) all.push_back(*d);
      if (auto d = as_definition(c.rhs(), c.lhs(), nvc)) all.push_back(*d);
    }
  }
  if (all.empty()) return std::nullopt;
  const std::string var = all.front().var;
  std::optional<Definition> best;
  for (const Definition& d : all) {
    if (d.var != var) continue;
    if (!best || d.rhs.size() < best->rhs.size() || (d.rhs.size() == best->rhs.size() && d.printed < best->printed))
      best = d;
  }
  return best;
}

}  // namespace detail

/// Eliminates variables that have a defining equation among the top-level
/// conjuncts. The defining conjunct itself degenerates to rhs = rhs.
inline ProcessedNVC substitute_definitions(ProcessedNVC nvc, const EvalOptions& opts = {}) {
  // each round removes one variable from the assertions, so this terminates
  for (std::size_t guard = 0; guard <= nvc.vars.size(); ++guard) {
    auto def = detail::pick_definition(nvc);
    if (!def) break;
    std::uint64_t before = nvc.content_hash();
    VarSpec& v = *nvc.find(def->var);
    for (Formula& a : nvc.assertions) a = substitute(a, def->var, def->rhs);
    for (auto& [name, rhs] : nvc.definitions) rhs = substitute(rhs, def->var, def->rhs);
    nvc.definitions.emplace_back(def->var, def->rhs);
    // the variable's box constraint moves onto its definition
    if (v.bounds.lo()) nvc.assertions.push_back(Formula::le(Expr::lit(*v.bounds.lo()), def->rhs));
    if (v.bounds.hi()) nvc.assertions.push_back(Formula::le(def->rhs, Expr::lit(*v.bounds.hi())));
    Interval range = eval_expr_interval(def->rhs, nvc.box(), opts);
    if (auto narrowed = v.bounds.intersect(range)) {
      std::optional<Scalar> lo = narrowed->lo(), hi = narrowed->hi();
      if (v.sort.is_int()) {
        if (lo) lo = Scalar(ceil_of(*lo));
        if (hi) hi = Scalar(floor_of(*hi));
      }
      if (!lo || !hi || *lo <= *hi) v.bounds = Interval(lo, hi);
    }
    nvc.record("substitute " + def->var, before);
  }
  return nvc;
}

/// Simplifies each assertion, splits top-level conjunctions and drops
/// assertions that became true. A false assertion replaces the whole list.
inline void simplify_assertions(ProcessedNVC& nvc) {
  std::vector<Formula> out;
  for (const Formula& a : nvc.assertions) {
    std::vector<Formula> parts;
    flatten_conjuncts(simplify_formula(a), parts);
    for (const Formula& p : parts) {
      if (p.is_true()) continue;
      if (p.is_false()) {
        nvc.assertions = {Formula::truth(false)};
        return;
      }
      detail::push_unique(out, p);
    }
  }
  nvc.assertions = std::move(out);
}

inline constexpr unsigned kMaxSimplifyRounds = 50;

/// Repeats substitution and both rewrite passes until the content hash is stable.
inline ProcessedNVC simplify_fixpoint(ProcessedNVC nvc, const EvalOptions& opts = {}, unsigned* rounds_out = nullptr,
                                      unsigned max_rounds = kMaxSimplifyRounds) {
  std::uint64_t start = nvc.content_hash();
  std::uint64_t h = start;
  unsigned rounds = 0;
  while (rounds < max_rounds) {
    ++rounds;
    nvc = substitute_definitions(std::move(nvc), opts);
    simplify_assertions(nvc);
    std::uint64_t next = nvc.content_hash();
    if (next == h) break;
    h = next;
  }
  if (rounds_out) *rounds_out = rounds;
  nvc.trace.push_back({"simplify", start, nvc.content_hash()});
  return nvc;
}

}  // namespace fpvc
