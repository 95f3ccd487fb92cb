#pragma once

// Shared helpers for the unit, property and acceptance tests: corpus access,
// random generators and independent oracles (native floats, plain doubles).

#include <fpvc/pipeline.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fpvc::test {

inline std::string corpus_path(const std::string& name) { return std::string(FPVC_CORPUS_DIR) + "/" + name; }

inline ProcessedNVC nvc_from(const std::string& text) { return parse_corpus(text).first; }

inline Formula formula_from(const std::string& sexpr, const std::map<std::string, Sort>& vars) {
  Env env;
  env.vars = vars;
  return translate_assertion(parse_sexpr(sexpr), env);
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline Box point_box(const Point& p) {
  Box b;
  for (const auto& [n, v] : p) b.emplace(n, Interval::point(v));
  return b;
}

/// Whitespace-insensitive token stream of an infix text.
inline std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    if (std::isalnum(c) || c == '_' || c == '.') {
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '.')) ++j;
    }
    out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
  bool chance(double p) { return std::bernoulli_distribution(p)(gen); }
  template <class T>
  const T& pick(const std::vector<T>& xs) { return xs[static_cast<std::size_t>(uniform_int(0, static_cast<int>(xs.size()) - 1))]; }
  // small rationals: integers, halves, decimals with up to 3 digits
  Scalar rational(int range) {
    switch (uniform_int(0, 2)) {
      case 0: return Scalar(uniform_int(-range, range));
      case 1: return make_scalar(uniform_int(-2 * range, 2 * range), 2);
      default: return make_scalar(uniform_int(-1000 * range, 1000 * range), 1000);
    }
  }
};

// ---------------------------------------------------------------------------
// Floating-point programs with a native oracle

/// A rounded expression tree whose value can be computed both symbolically and
/// with native float/double arithmetic.
struct FpNode {
  enum Kind { Var, Lit, Add, Sub, Mul, DivLit } kind = Lit;
  int var = 0;
  double lit = 0;
  std::vector<FpNode> kids;

  template <class F>
  F eval(const std::vector<F>& xs) const {
    switch (kind) {
      case Var: return xs[static_cast<std::size_t>(var)];
      case Lit: return static_cast<F>(lit);
      case Add: return kids[0].eval(xs) + kids[1].eval(xs);
      case Sub: return kids[0].eval(xs) - kids[1].eval(xs);
      case Mul: return kids[0].eval(xs) * kids[1].eval(xs);
      case DivLit: return kids[0].eval(xs) / static_cast<F>(lit);
    }
    return F(0);
  }

  Expr to_expr(FloatKind k, const std::vector<std::string>& names) const {
    auto rnd = [&](Expr e) { return Expr::round_fp(k, RoundMode::NearestEven, std::move(e)); };
    switch (kind) {
      case Var: return Expr::var(names[static_cast<std::size_t>(var)]);
      case Lit: return Expr::lit(Scalar(lit));
      case Add: return rnd(kids[0].to_expr(k, names) + kids[1].to_expr(k, names));
      case Sub: return rnd(kids[0].to_expr(k, names) - kids[1].to_expr(k, names));
      case Mul: return rnd(kids[0].to_expr(k, names) * kids[1].to_expr(k, names));
      case DivLit: return rnd(kids[0].to_expr(k, names) / Expr::lit(Scalar(lit)));
    }
    return Expr::lit(0L);
  }
};

/// A float of modest magnitude: random bits of a float or double in [-4, 4].
template <class F>
F random_float(Rng& r) {
  switch (r.uniform_int(0, 3)) {
    case 0: return static_cast<F>(r.uniform_int(-4, 4));
    case 1: return static_cast<F>(r.uniform(-1, 1) * std::pow(2.0, -r.uniform_int(0, 20)));
    default: return static_cast<F>(r.uniform(-4, 4));
  }
}

inline FpNode random_fp_node(Rng& r, int depth, int nvars) {
  FpNode n;
  if (depth == 0 || r.chance(0.25)) {
    if (r.chance(0.75)) {
      n.kind = FpNode::Var;
      n.var = r.uniform_int(0, nvars - 1);
    } else {
      n.kind = FpNode::Lit;
      static const std::vector<double> lits{0.5, 1, 2, 3, 6, 0.25, 0.125, 1.5, 10};
      n.lit = r.pick(lits);
    }
    return n;
  }
  int op = r.uniform_int(0, 3);
  n.kind = static_cast<FpNode::Kind>(FpNode::Add + op);
  n.kids.push_back(random_fp_node(r, depth - 1, nvars));
  if (n.kind == FpNode::DivLit) {
    static const std::vector<double> divs{2, 3, 6, 7, 10, 0.75};
    n.lit = r.pick(divs);
  } else {
    n.kids.push_back(random_fp_node(r, depth - 1, nvars));
  }
  return n;
}

/// One atom side: a rounded tree, an exact polynomial plus a rounded tree, or a constant.
struct FpSide {
  std::optional<FpNode> tree;
  int scale = 1;               // side = scale * tree + poly
  std::optional<int> poly_var;  // poly = var * var when present
  Scalar constant;             // only when tree is absent

  Expr to_expr(FloatKind k, const std::vector<std::string>& names) const {
    if (!tree) return Expr::lit(constant);
    Expr t = tree->to_expr(k, names);
    if (scale != 1) t = Expr::lit(static_cast<long>(scale)) * t;
    if (poly_var) t = t + Expr::var(names[static_cast<std::size_t>(*poly_var)]) * Expr::var(names[static_cast<std::size_t>(*poly_var)]);
    return t;
  }

  /// Value under IEEE semantics, computed with native F arithmetic for the tree.
  template <class F>
  Scalar oracle(const std::vector<F>& xs) const {
    if (!tree) return constant;
    Scalar v = Scalar(static_cast<double>(tree->eval(xs))) * scale;
    if (poly_var) {
      Scalar p(static_cast<double>(xs[static_cast<std::size_t>(*poly_var)]));
      v += p * p;
    }
    return v;
  }
};

struct FpAtom {
  Rel rel;
  FpSide lhs, rhs;
};

/// A boolean skeleton over FpAtoms.
struct FpFormula {
  enum Kind { Atom, Not, And, Or, Implies } kind = Atom;
  int atom = 0;
  std::vector<FpFormula> kids;

  bool truth(const std::vector<bool>& atoms) const {
    switch (kind) {
      case Atom: return atoms[static_cast<std::size_t>(atom)];
      case Not: return !kids[0].truth(atoms);
      case And: return kids[0].truth(atoms) && kids[1].truth(atoms);
      case Or: return kids[0].truth(atoms) || kids[1].truth(atoms);
      case Implies: return !kids[0].truth(atoms) || kids[1].truth(atoms);
    }
    return false;
  }

  Formula to_formula(const std::vector<Formula>& atoms) const {
    switch (kind) {
      case Atom: return atoms[static_cast<std::size_t>(atom)];
      case Not: return Formula::negate(kids[0].to_formula(atoms));
      case And: return Formula::conj({kids[0].to_formula(atoms), kids[1].to_formula(atoms)});
      case Or: return Formula::disj({kids[0].to_formula(atoms), kids[1].to_formula(atoms)});
      case Implies: return Formula::implies(kids[0].to_formula(atoms), kids[1].to_formula(atoms));
    }
    return Formula::truth(true);
  }
};

inline FpFormula random_skeleton(Rng& r, int natoms, int& next, int depth) {
  FpFormula f;
  if (next >= natoms || depth == 0 || (next > 0 && r.chance(0.3))) {
    f.kind = FpFormula::Atom;
    f.atom = next < natoms ? next++ : r.uniform_int(0, natoms - 1);
    return f;
  }
  int k = r.uniform_int(0, 3);
  if (k == 0) {
    f.kind = FpFormula::Not;
    f.kids.push_back(random_skeleton(r, natoms, next, depth - 1));
    return f;
  }
  f.kind = static_cast<FpFormula::Kind>(FpFormula::And + (k - 1));
  f.kids.push_back(random_skeleton(r, natoms, next, depth - 1));
  f.kids.push_back(random_skeleton(r, natoms, next, depth - 1));
  return f;
}

inline bool rel_holds(Rel rel, const Scalar& a, const Scalar& b) {
  switch (rel) {
    case Rel::LE: return a <= b;
    case Rel::LT: return a < b;
    case Rel::GE: return a >= b;
    case Rel::GT: return a > b;
    case Rel::EQ: return a == b;
  }
  return false;
}

struct TrialOutcome {
  bool original = false;     // oracle truth of the FP formula at the point
  Truth eliminated = Truth::Unknown;
  std::string detail;
};

/// One weakening trial: random FP formula and float point; the eliminated
/// formula must hold wherever the oracle says the original holds.
template <class F>
TrialOutcome fp_weakening_trial(Rng& r) {
  const FloatKind kind = sizeof(F) == 4 ? FloatKind::Single : FloatKind::Double;
  const std::vector<std::string> names{"x", "y", "z"};
  const int nvars = 3;
  std::vector<F> xs;
  for (int i = 0; i < nvars; ++i) xs.push_back(random_float<F>(r));

  int natoms = r.uniform_int(1, 3);
  std::vector<FpAtom> atoms;
  for (int i = 0; i < natoms; ++i) {
    FpAtom a;
    static const std::vector<Rel> rels{Rel::LE, Rel::LT, Rel::GE, Rel::GT, Rel::EQ};
    a.rel = r.pick(rels);
    a.lhs.tree = random_fp_node(r, r.uniform_int(1, 3), nvars);
    if (r.chance(0.3)) a.lhs.scale = -1;
    if (r.chance(0.2)) a.lhs.poly_var = r.uniform_int(0, nvars - 1);
    if (r.chance(0.3)) {
      a.rhs.tree = random_fp_node(r, r.uniform_int(1, 2), nvars);
    } else {
      // thresholds right at or next to the float value stress the boundary
      Scalar v = a.lhs.oracle(xs);
      switch (r.uniform_int(0, 3)) {
        case 0: a.rhs.constant = v; break;
        case 1: a.rhs.constant = v + pow2(-30) * r.uniform_int(-3, 3); break;
        case 2: a.rhs.constant = v + make_scalar(r.uniform_int(-100, 100), 1000); break;
        default: a.rhs.constant = r.rational(4);
      }
    }
    if (r.chance(0.5)) std::swap(a.lhs, a.rhs);
    atoms.push_back(std::move(a));
  }
  int next = 0;
  FpFormula skel = random_skeleton(r, natoms, next, 3);
  if (next < natoms) {
    // make sure every atom occurs
    for (int i = next; i < natoms; ++i) {
      FpFormula both;
      both.kind = r.chance(0.5) ? FpFormula::And : FpFormula::Or;
      FpFormula leaf;
      leaf.atom = i;
      both.kids = {skel, leaf};
      skel = both;
    }
  }

  std::vector<bool> truths;
  std::vector<Formula> fatoms;
  for (const FpAtom& a : atoms) {
    truths.push_back(rel_holds(a.rel, a.lhs.oracle(xs), a.rhs.oracle(xs)));
    fatoms.push_back(Formula::atom(a.rel, a.lhs.to_expr(kind, names), a.rhs.to_expr(kind, names)));
  }
  TrialOutcome out;
  out.original = skel.truth(truths);

  ProcessedNVC nvc;
  Box box;
  for (const std::string& n : names) {
    nvc.vars.push_back({n, Sort::floating(kind), Interval::closed(-4, 4)});
    box.emplace(n, Interval::closed(-4, 4));
  }
  nvc.assertions = {skel.to_formula(fatoms)};
  std::vector<FPContext> ctxs = collect_fp_contexts(nvc);
  auto failures = assign_internal_bounds(ctxs, box);
  if (!failures.empty()) {
    out.eliminated = Truth::CertainlyFalse;
    out.detail = "no bound: " + failures.front().second;
    return out;
  }
  ProcessedNVC exact = eliminate_fp(nvc, ctxs);
  Point p;
  for (int i = 0; i < nvars; ++i) p[names[static_cast<std::size_t>(i)]] = Scalar(static_cast<double>(xs[static_cast<std::size_t>(i)]));
  out.eliminated = eval_conjunction(exact.assertions, point_box(p), EvalOptions{});
  if (out.original && out.eliminated != Truth::CertainlyTrue) {
    std::ostringstream os;
    os << to_sexpr(nvc.assertions[0]) << " at";
    for (const auto& [n, v] : p) os << " " << n << "=" << to_fraction_string(v);
    out.detail = os.str();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact real expressions

struct ExprGen {
  Rng& r;
  std::vector<std::string> vars;
  bool transcendental = false;
  bool polynomial_only = false;

  Expr leaf() {
    if (!vars.empty() && r.chance(0.65)) return Expr::var(r.pick(vars));
    return Expr::lit(r.rational(3));
  }

  Expr gen(int depth) {
    if (depth == 0 || r.chance(0.2)) return leaf();
    int k = r.uniform_int(0, polynomial_only ? 4 : (transcendental ? 10 : 7));
    switch (k) {
      case 0: return gen(depth - 1) + gen(depth - 1);
      case 1: return gen(depth - 1) - gen(depth - 1);
      case 2: return gen(depth - 1) * gen(depth - 1);
      case 3: return -gen(depth - 1);
      case 4: return Expr::pow(gen(depth - 1), static_cast<unsigned>(r.uniform_int(2, 3)));
      case 5: return Expr::unary(Op::Abs, gen(depth - 1));
      case 6: return Expr::binary(r.chance(0.5) ? Op::Min : Op::Max, gen(depth - 1), gen(depth - 1));
      case 7: return gen(depth - 1) / Expr::lit(Scalar(r.uniform_int(1, 7)));
      case 8: return Expr::unary(Op::Sin, gen(depth - 1));
      case 9: return Expr::unary(Op::Cos, gen(depth - 1));
      default: return Expr::unary(Op::Exp, gen(depth - 1) / Expr::lit(4L));
    }
  }
};

/// Mid-value of e at p at high precision (exact for rational expressions).
inline Scalar value_at(const Expr& e, const Point& p, unsigned prec = 200) {
  Interval v = eval_expr_interval(e, point_box(p), prec);
  return v.midpoint();
}

// ---------------------------------------------------------------------------
// Simplifier equivalence (random formula / point pairs)

struct FormulaGen {
  ExprGen& eg;
  Rng& r;

  Formula atom(int depth) {
    static const std::vector<Rel> rels{Rel::LE, Rel::LT, Rel::GE, Rel::GT, Rel::EQ};
    Expr a = eg.gen(depth), b = eg.gen(depth);
    switch (r.uniform_int(0, 5)) {
      case 0: b = a;  // tautological or contradictory comparisons
        break;
      case 1: a = a - a + eg.gen(1);
        break;
      case 2: a = Expr::lit(0L) * a + b * Expr::lit(1L);
        break;
      default: break;
    }
    return Formula::atom(r.pick(rels), a, b);
  }

  Formula gen(int depth) {
    if (depth == 0 || r.chance(0.3)) {
      if (r.chance(0.08)) return Formula::truth(r.chance(0.5));
      return atom(2);
    }
    switch (r.uniform_int(0, 4)) {
      case 0: return Formula::negate(gen(depth - 1));
      case 1: return Formula::negate(Formula::negate(gen(depth - 1)));
      case 2: return Formula::conj({gen(depth - 1), gen(depth - 1)});
      case 3: return Formula::disj({gen(depth - 1), gen(depth - 1)});
      default: return Formula::implies(gen(depth - 1), gen(depth - 1));
    }
  }
};

/// Truth of the NVC at p including the definitions recorded by substitution.
inline Truth truth_with_definitions(const ProcessedNVC& nvc, const Point& p) {
  std::vector<Formula> all = nvc.assertions;
  for (const auto& [v, rhs] : nvc.definitions) all.push_back(Formula::eq(Expr::var(v), rhs));
  return eval_conjunction(all, point_box(p), EvalOptions{});
}

struct EquivalenceOutcome {
  Truth before = Truth::Unknown, after = Truth::Unknown;
  unsigned rounds = 0;
  std::string detail;
};

inline EquivalenceOutcome simplifier_trial(Rng& r) {
  EquivalenceOutcome out;
  ProcessedNVC nvc;
  nvc.vars = {{"x", Sort::real(), Interval::closed(-8, 8)},
              {"y", Sort::real(), Interval::closed(-8, 8)},
              {"n", Sort::integer(), Interval::closed(-5, 5)}};
  ExprGen eg{r, {"x", "y", "n"}, false, false};
  FormulaGen fg{eg, r};
  int k = r.uniform_int(1, 3);
  for (int i = 0; i < k; ++i) nvc.assertions.push_back(fg.gen(3));
  Point p{{"x", make_scalar(r.uniform_int(-64, 64), 8)}, {"y", make_scalar(r.uniform_int(-80, 80), 10)},
          {"n", Scalar(r.uniform_int(-5, 5))}};
  if (r.chance(0.4)) {
    // a definition that holds at the point, so substitution is exercised on true instances
    ExprGen dg{r, {"y", "n"}, false, true};
    Expr rhs = dg.gen(2);
    Scalar v = value_at(rhs, p);
    if (v >= -8 && v <= 8) {
      p["x"] = v;
      nvc.assertions.insert(nvc.assertions.begin(), Formula::eq(Expr::var("x"), rhs));
    }
  }
  out.before = eval_conjunction(nvc.assertions, point_box(p), EvalOptions{});
  ProcessedNVC after = simplify_fixpoint(nvc, EvalOptions{}, &out.rounds);
  out.after = truth_with_definitions(after, p);
  if (out.before != out.after) {
    std::ostringstream os;
    for (const Formula& f : nvc.assertions) os << to_sexpr(f) << "; ";
    os << "=> ";
    for (const Formula& f : after.assertions) os << to_sexpr(f) << "; ";
    for (const auto& [n, v] : p) os << " " << n << "=" << to_fraction_string(v);
    out.detail = os.str();
  }
  return out;
}

// ---------------------------------------------------------------------------
// derive_bounds with planted satisfying points

struct PlantedOutcome {
  bool contained = true;
  std::string detail;
};

inline PlantedOutcome planted_bounds_trial(Rng& r) {
  const std::vector<std::string> names{"x", "y", "z", "k"};
  Point p{{"x", r.rational(5)}, {"y", r.rational(5)}, {"z", r.rational(5)}, {"k", Scalar(r.uniform_int(-9, 9))}};
  ProcessedNVC nvc;
  for (const std::string& n : names) {
    Sort s = n == "k" ? Sort::integer() : Sort::real();
    Interval b;
    if (r.chance(0.3)) {
      // declared bounds, when present, contain the point
      b = Interval::closed(p[n] - r.uniform_int(0, 4), p[n] + r.uniform_int(0, 4));
    }
    nvc.vars.push_back({n, s, b});
  }
  ExprGen eg{r, names, r.chance(0.3), false};
  auto true_atom = [&](Expr a, Expr b) {
    Interval va = eval_expr_interval(a, point_box(p), 200), vb = eval_expr_interval(b, point_box(p), 200);
    std::vector<Rel> ok;
    for (Rel rel : {Rel::LE, Rel::LT, Rel::GE, Rel::GT, Rel::EQ})
      if (Evaluator::compare(rel, va, vb) == Truth::CertainlyTrue) ok.push_back(rel);
    if (ok.empty()) return std::optional<Formula>{};
    return std::optional<Formula>{Formula::atom(r.pick(ok), a, b)};
  };
  auto false_atom = [&](Expr a, Expr b) {
    Interval va = eval_expr_interval(a, point_box(p), 200), vb = eval_expr_interval(b, point_box(p), 200);
    std::vector<Rel> bad;
    for (Rel rel : {Rel::LE, Rel::LT, Rel::GE, Rel::GT, Rel::EQ})
      if (Evaluator::compare(rel, va, vb) == Truth::CertainlyFalse) bad.push_back(rel);
    if (bad.empty()) return std::optional<Formula>{};
    return std::optional<Formula>{Formula::atom(r.pick(bad), a, b)};
  };
  int n = r.uniform_int(2, 6);
  for (int i = 0; i < n; ++i) {
    Expr v = Expr::var(r.pick(names));
    Expr other = r.chance(0.5) ? eg.gen(2) : v * Expr::lit(r.rational(2)) + eg.gen(1);
    int shape = r.uniform_int(0, 4);
    if (shape <= 1) {
      if (auto a = true_atom(shape == 0 ? v : other, shape == 0 ? other : v)) nvc.assertions.push_back(*a);
    } else if (shape == 2) {
      if (auto a = false_atom(v, other)) nvc.assertions.push_back(Formula::negate(*a));
    } else if (shape == 3) {
      auto a = true_atom(v, other);
      auto b = false_atom(v, eg.gen(1));
      if (a && b) nvc.assertions.push_back(Formula::disj({*b, *a}));
    } else {
      // v = e with v taken from the point
      std::string name = r.pick(std::vector<std::string>{"x", "y", "z"});
      ExprGen g2{r, {"k", name == "x" ? "y" : "x"}, false, true};
      Expr rhs = g2.gen(2);
      Scalar val = value_at(rhs, p);
      bool bounded_ok = true;
      if (const VarSpec* vs = nvc.find(name)) bounded_ok = vs->bounds.contains(val);
      if (bounded_ok && std::none_of(nvc.assertions.begin(), nvc.assertions.end(),
                                     [&](const Formula& f) { return mentions(f, name); })) {
        p[name] = val;
        nvc.assertions.push_back(Formula::eq(Expr::var(name), rhs));
      }
    }
  }
  PlantedOutcome out;
  // later rewrites of p may have invalidated earlier atoms; keep only what holds
  std::vector<Formula> kept;
  for (const Formula& f : nvc.assertions)
    if (eval_formula_interval(f, point_box(p), 200) == Truth::CertainlyTrue) kept.push_back(f);
  nvc.assertions = kept;
  if (nvc.assertions.empty()) return out;
  BoundsResult b = derive_bounds(nvc);
  for (const auto& [name, v] : p) {
    if (!b.box.at(name).contains(v)) {
      out.contained = false;
      std::ostringstream os;
      for (const Formula& f : nvc.assertions) os << to_sexpr(f) << "; ";
      os << name << "=" << to_fraction_string(v) << " outside " << b.box.at(name).to_string();
      out.detail = os.str();
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Constructed NVCs for the prover

struct ProverCase {
  ProcessedNVC nvc;
  Point planted;  // sat cases only
};

inline ProcessedNVC box_nvc(const std::vector<std::string>& names, const Scalar& lo, const Scalar& hi) {
  ProcessedNVC nvc;
  for (const std::string& n : names) nvc.vars.push_back({n, Sort::real(), Interval::closed(lo, hi)});
  return nvc;
}

/// f <= c - g and f >= c + g, or a square below a negative constant.
inline ProverCase unsat_case(Rng& r) {
  ProverCase pc;
  std::vector<std::string> names{"x"};
  if (r.chance(0.5)) names.push_back("y");
  pc.nvc = box_nvc(names, -2, 2);
  ExprGen eg{r, names, true, false};
  Expr f = eg.gen(3);
  Scalar gamma = make_scalar(r.uniform_int(1, 50), 100);
  if (r.chance(0.8)) {
    Scalar c = r.rational(3);
    pc.nvc.assertions = {Formula::le(f, Expr::lit(c - gamma)), Formula::ge(f, Expr::lit(c + gamma))};
  } else {
    pc.nvc.assertions = {Formula::le(Expr::pow(f, 2) + Expr::lit(gamma), Expr::lit(0L))};
  }
  return pc;
}

/// |f - f(p)| <= g and |h - h(p)| <= g2 with the planted point p.
inline ProverCase sat_case(Rng& r) {
  ProverCase pc;
  std::vector<std::string> names{"x"};
  if (r.chance(0.5)) names.push_back("y");
  pc.nvc = box_nvc(names, -2, 2);
  for (const std::string& n : names) pc.planted[n] = make_scalar(r.uniform_int(-1900, 1900), 1000);
  ExprGen eg{r, names, true, false};
  int natoms = r.uniform_int(1, 2);
  for (int i = 0; i < natoms; ++i) {
    Expr f = eg.gen(3);
    Scalar c = round_decimal(value_at(f, pc.planted), false, 12);
    Scalar gamma = make_scalar(r.uniform_int(1, 100), 1000);
    pc.nvc.assertions.push_back(Formula::le(f, Expr::lit(c + gamma)));
    pc.nvc.assertions.push_back(Formula::ge(f, Expr::lit(c - gamma)));
  }
  return pc;
}

/// Certified points must also hold at 512 bits.
inline bool reverifies(const ProcessedNVC& nvc, const Point& p) {
  EvalOptions o;
  o.prec = 512;
  return certify_point(nvc.assertions, p, o) == Truth::CertainlyTrue;
}

// ---------------------------------------------------------------------------
// Independent numeric oracles

/// max |(1+x)/2 - sqrt(x)| over a uniform grid of [lo, hi].
inline double heron_grid_max(double lo, double hi, std::size_t n) {
  double worst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    worst = std::max(worst, std::fabs((1 + x) / 2 - std::sqrt(x)));
  }
  return worst;
}

/// Largest difference between the single-precision Taylor program and its
/// exact value (long double) over sampled floats in [-0.5, 0.5].
inline double taylor_sin_rounding_max(std::size_t n) {
  double worst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    float x = static_cast<float>(-0.5 + static_cast<double>(i) / static_cast<double>(n - 1));
    float fx = x - ((x * x) * x) / 6.0f;
    long double lx = x;
    long double ex = lx - lx * lx * lx / 6.0L;
    worst = std::max(worst, static_cast<double>(std::fabs(static_cast<long double>(fx) - ex)));
  }
  return worst;
}

}  // namespace fpvc::test
