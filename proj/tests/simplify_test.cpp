#include "support/support.hpp"

#include <gtest/gtest.h>

using namespace fpvc;
using namespace fpvc::test;

namespace {

std::vector<std::string> printed(const ProcessedNVC& nvc) {
  std::vector<std::string> out;
  for (const Formula& f : nvc.assertions) out.push_back(to_sexpr(f));
  return out;
}

Formula real_formula(const std::string& s) { return formula_from(s, {{"x", Sort::real()}, {"y", Sort::real()}}); }

}  // namespace

TEST(SimplifyBool, TrueAndFalseAbsorption) {
  Formula phi = real_formula("(<= x 1)");
  Formula f = Formula::conj({Formula::disj({Formula::negate(phi), Formula::truth(true)}),
                             Formula::disj({phi, Formula::truth(false)})});
  EXPECT_EQ(simplify_formula(f), phi);
}

TEST(SimplifyBool, ReflexiveEqualityAndDoubleNegation) {
  EXPECT_TRUE(simplify_formula(real_formula("(= (sin x) (sin x))")).is_true());
  Formula phi = real_formula("(< x y)");
  EXPECT_EQ(simplify_formula(Formula::negate(Formula::negate(phi))), phi);
}

TEST(SimplifyBool, GreaterThanIsTurnedAround) {
  EXPECT_EQ(to_sexpr(simplify_formula(real_formula("(>= x 2)"))), "(<= 2 x)");
  EXPECT_EQ(to_sexpr(simplify_formula(real_formula("(> 3 x)"))), "(< x 3)");
}

TEST(SimplifyArith, Identities) {
  Expr phi = Expr::unary(Op::Sin, Expr::var("x"));
  EXPECT_EQ(simplify_arith(phi / Expr::lit(1L)), phi);
  EXPECT_EQ(simplify_arith(phi * Expr::lit(1L)), phi);
  EXPECT_EQ(simplify_arith(phi + Expr::lit(0L)), phi);
  EXPECT_TRUE(simplify_arith(Expr::lit(0L) + Expr::lit(1L)).is_lit(1));
  EXPECT_EQ(simplify_arith(Expr::binary(Op::Min, phi, phi)), phi);
  EXPECT_EQ(simplify_arith(Expr::binary(Op::Max, phi, phi)), phi);
  EXPECT_EQ(simplify_arith(-(-phi)), phi);
  EXPECT_TRUE(simplify_arith(phi * Expr::lit(0L)).is_lit(0));
}

TEST(SimplifyArith, ZeroProductKeepsPartialOperations) {
  Expr partial = Expr::lit(1L) / Expr::var("x");
  EXPECT_FALSE(simplify_arith(partial * Expr::lit(0L)).is_lit());
  Expr root = Expr::unary(Op::Sqrt, Expr::var("x"));
  EXPECT_FALSE(simplify_arith(root * Expr::lit(0L)).is_lit());
}

TEST(Substitution, ReplacesTheDefinedVariable) {
  ProcessedNVC out = substitute_definitions(nvc_from("i (int)\ni1 (int)\nassert (= i (+ i1 1))\nassert (<= (* i i) 10)\n"));
  EXPECT_EQ(printed(out), (std::vector<std::string>{"(= (+ i1 1) (+ i1 1))", "(<= (* (+ i1 1) (+ i1 1)) 10)"}));
  ASSERT_EQ(out.definitions.size(), 1u);
  EXPECT_EQ(out.definitions[0].first, "i");
}

TEST(Substitution, ConstantDefinitionReplacesEveryOccurrence) {
  ProcessedNVC out = substitute_definitions(nvc_from("x (real)\nassert (= x 1)\nassert (= x (+ 0 1))\nassert (<= (sin x) 0.5)\n"));
  EXPECT_EQ(printed(out), (std::vector<std::string>{"(= 1 1)", "(= 1 (+ 0 1))", "(<= (sin 1) (/ 1 2))"}));
}

TEST(Substitution, CircularDefinitionsAreLeftAlone) {
  ProcessedNVC in = nvc_from("x (real)\nassert (= x (+ x 1))\n");
  ProcessedNVC out = substitute_definitions(in);
  EXPECT_EQ(printed(out), printed(in));
  EXPECT_TRUE(out.definitions.empty());
}

TEST(Fixpoint, ChainedDefinitionsResolveWithinTwoRounds) {
  unsigned rounds = 0;
  ProcessedNVC out = simplify_fixpoint(nvc_from("a (real)\nb (real)\nassert (= a b)\nassert (= b 1)\nassert (<= (sin a) 0.5)\n"), {}, &rounds);
  EXPECT_EQ(printed(out), std::vector<std::string>{"(<= (sin 1) (/ 1 2))"});
  EXPECT_LE(rounds, 2u);
}

TEST(Fixpoint, MinimalInputTakesOneRound) {
  unsigned rounds = 0;
  ProcessedNVC in = nvc_from("x (real)\nassert (<= (sin x) x)\n");
  ProcessedNVC out = simplify_fixpoint(in, {}, &rounds);
  EXPECT_EQ(rounds, 1u);
  EXPECT_EQ(printed(out), printed(in));
}

TEST(Fixpoint, CorpusIsIdempotentAndTerminates) {
  for (const char* name : {"approx_sin_le.nvc", "heron_init.nvc", "reduce_half_pi_le.nvc", "sin_ge.nvc", "taylor_sin.nvc"}) {
    unsigned rounds = 0, again = 0;
    ProcessedNVC once = simplify_fixpoint(load_nvc(corpus_path(name)).first, {}, &rounds);
    ProcessedNVC twice = simplify_fixpoint(once, {}, &again);
    EXPECT_LE(rounds, kMaxSimplifyRounds) << name;
    EXPECT_EQ(again, 1u) << name;
    EXPECT_EQ(once.content_hash(), twice.content_hash()) << name;
  }
}

TEST(Fixpoint, TaylorSinKeepsOnlyTheGoal) {
  PipelineResult r = run_process(corpus_path("taylor_sin.nvc"), {});
  const VarSpec* x = r.processed.find("x");
  ASSERT_TRUE(x);
  EXPECT_EQ(bound_line(*x), "x (float32) ∈ [-0.5, 0.5]");
  // only the literal conversion and the goal survive; no isFiniteFloat conjuncts
  ASSERT_EQ(r.processed.assertions.size(), 2u);
  EXPECT_EQ(to_sexpr(r.processed.assertions[0]), "(= (rnd32 RNA 1) 1)");
  EXPECT_EQ(r.exact.assertions.size(), 1u);
  EXPECT_EQ(r.exact.assertions[0].kind(), FKind::Not);
}

TEST(Bounds, IsolatedVariablesTightenTheBox) {
  BoundsResult b = derive_bounds(nvc_from(
      "x (real) in [0, 10]\ny (real)\nassert (<= y (- x 1))\nassert (<= (- 3) y)\nassert (not (< y (- 2)))\n"));
  EXPECT_EQ(b.box.at("y"), Interval::closed(-2, 9));
  EXPECT_EQ(b.box.at("x"), Interval::closed(0, 10));
  EXPECT_TRUE(b.converged);
}

TEST(Bounds, IntegerBoundsAreRoundedInward) {
  BoundsResult b = derive_bounds(nvc_from("k (int)\nassert (<= (/ 1 2) k)\nassert (< k 7.5)\n"));
  EXPECT_EQ(b.box.at("k"), Interval::closed(1, 7));
}

TEST(Bounds, ContradictoryBoundsAreEmpty) {
  EXPECT_THROW(derive_bounds(nvc_from("x (real)\nassert (<= x 0)\nassert (<= 1 x)\n")), EmptyBox);
}

TEST(Bounds, ApproxSinArgument) {
  ProcessedNVC out = simplify_and_bound(load_nvc(corpus_path("approx_sin_le.nvc")).first);
  const VarSpec* x = out.find("x");
  ASSERT_TRUE(x);
  EXPECT_EQ(x->bounds, Interval::closed(Scalar(-6851933, 8388608), Scalar(6851933, 8388608)));
}

TEST(Bounds, QuadrantCounterIsAnInteger) {
  ProcessedNVC out = simplify_and_bound(load_nvc(corpus_path("sin_ge.nvc")).first);
  const VarSpec* r1 = out.find("r1");
  ASSERT_TRUE(r1);
  EXPECT_EQ(bound_line(*r1), "r1 (int) ∈ [0, 511]");
}

TEST(Bounds, DefinedVariablesGetBoundsFromTheirDefinition) {
  ProcessedNVC out = simplify_and_bound(load_nvc(corpus_path("heron_init.nvc")).first);
  for (const VarSpec& v : out.vars) EXPECT_TRUE(v.bounds.bounded()) << v.name;
}

TEST(Bounds, UnconstrainedVariablesStayInfinite) {
  BoundsResult b = derive_bounds(nvc_from("x (real)\ny (real)\nassert (<= 0 x)\nassert (<= x 1)\nassert (<= (* y y) (+ y 3))\n"));
  EXPECT_TRUE(b.box.at("y").is_entire());
  EXPECT_EQ(bounds_string(b.box.at("y")), "(-∞, ∞)");
}
