#include "support/support.hpp"

#include <gtest/gtest.h>

#include <cstring>

using namespace fpvc;
using namespace fpvc::test;

TEST(SExpr, ParsesNestedListsAndComments) {
  auto forest = parse_sexprs("; header\n(assert (<= x |odd name|)) (check-sat)");
  ASSERT_EQ(forest.size(), 2u);
  EXPECT_EQ(forest[0].head(), "assert");
  EXPECT_EQ(to_string(forest[0]), "(assert (<= x |odd name|))");
  EXPECT_TRUE(forest[1][0].is_atom("check-sat"));
}

TEST(SExpr, ReportsUnbalancedParensWithPosition) {
  try {
    parse_sexprs("(assert\n  (<= x 1)");
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind, ParseError::Kind::UnbalancedParens);
    EXPECT_EQ(e.line, 1);
  }
  EXPECT_THROW(parse_sexprs("(a))"), ParseError);
}

TEST(SExpr, RejectsUnterminatedQuotedSymbols) {
  try {
    parse_sexprs("(assert |abc)");
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind, ParseError::Kind::InvalidToken);
  }
}

TEST(FpLiteral, DecodesKnownPatterns) {
  EXPECT_EQ(decode_fp_literal("#b0", "#b01111111", "#b00000000000000000000000").first, Scalar(1));
  EXPECT_EQ(decode_fp_literal("#b0", "#b01111110", "#b00000000000000000000000").first, Scalar(1, 2));
  EXPECT_EQ(decode_fp_literal("#b0", "#b10000001", "#b10000000000000000000000").first, Scalar(6));
  EXPECT_EQ(decode_fp_literal("#b1", "#b00000000", "#b00000000000000000000001").first, -pow2(-149));
  auto [v, k] = decode_fp_literal("#b0", "#b01111111111", "#b1000000000000000000000000000000000000000000000000000");
  EXPECT_EQ(k, FloatKind::Double);
  EXPECT_EQ(v, Scalar(3, 2));
}

TEST(FpLiteral, NonFiniteAndBadWidthsAreErrors) {
  EXPECT_THROW(decode_fp_literal("#b0", "#b11111111", "#b00000000000000000000000"), NonFiniteLiteral);
  EXPECT_THROW(decode_fp_literal("#b0", "#b11111111", "#b00000000000000000000001"), NonFiniteLiteral);
  EXPECT_THROW(decode_fp_literal("#b0", "#b1111111", "#b00000000000000000000000"), Error);
}

TEST(FpLiteral, WordDecodingAgreesWithNativeBits) {
  Rng r(11);
  for (int i = 0; i < 20000; ++i) {
    std::uint32_t w = static_cast<std::uint32_t>(r.gen());
    float f;
    std::memcpy(&f, &w, sizeof f);
    if (!std::isfinite(f)) continue;
    EXPECT_EQ(decode_fp_word(w, FloatFormat::single_format()), Scalar(static_cast<double>(f)));
    FpBits b = encode_fp_literal(Scalar(static_cast<double>(f)), FloatFormat::single_format());
    if (f != 0) {
      EXPECT_EQ(decode_fp_literal(b, FloatFormat::single_format()), Scalar(static_cast<double>(f)));
    }
    std::uint64_t w64 = r.gen();
    double d;
    std::memcpy(&d, &w64, sizeof d);
    if (std::isfinite(d)) {
      EXPECT_EQ(decode_fp_word(w64, FloatFormat::double_format()), Scalar(d));
    }
  }
}

TEST(FpLiteral, SmtRenderingRoundTrips) {
  std::string s = fp_literal_smt(Scalar(6), FloatFormat::single_format());
  EXPECT_EQ(s, "(fp #b0 #b10000001 #b10000000000000000000000)");
}

namespace {

std::map<std::string, Sort> float_x() { return {{"x", Sort::floating(FloatKind::Single)}}; }

}  // namespace

TEST(Translate, FloatOperationsBecomeRoundingPoints) {
  Formula f = formula_from("(fp.leq (fp.mul RNE x x) (fp #b0 #b01111111 #b00000000000000000000000))", float_x());
  EXPECT_EQ(to_sexpr(f), "(<= (rnd32 RNE (* x x)) 1)");
  Formula g = formula_from("(<= (+ (sin (fp.to_real x)) (* (- 1.0) x)) 0.0)", float_x());
  EXPECT_EQ(to_sexpr(g), "(<= (+ (sin x) (* (- 1) x)) 0)");
}

TEST(Translate, LetBindingsAreExpanded) {
  Formula f = formula_from("(let ((a (fp.add RNE x x))) (fp.lt a x))", float_x());
  EXPECT_EQ(to_sexpr(f), "(< (rnd32 RNE (+ x x)) x)");
}

TEST(Translate, UnsupportedFunctionsAreReported) {
  Env env;
  env.vars = float_x();
  try {
    translate_assertion(parse_sexpr("(<= (ite (<= x 0.0) x 1.0) 2.0)"), env);
    FAIL() << "no error";
  } catch (const TranslateError& e) {
    EXPECT_EQ(e.reason, DropReason::UnsupportedFunction);
  }
}

TEST(Translate, MixedPrecisionIsRejected) {
  Env env;
  env.vars = {{"x", Sort::floating(FloatKind::Single)}, {"y", Sort::floating(FloatKind::Double)}};
  try {
    translate_assertion(parse_sexpr("(fp.leq (fp.add RNE x y) x)"), env);
    FAIL() << "no error";
  } catch (const TranslateError& e) {
    EXPECT_EQ(e.reason, DropReason::MixedPrecision);
  }
}

TEST(Corpus, ParsesBoundsAndAssertions) {
  auto [nvc, report] = parse_corpus(
      "-- comment\nBounds on variables:\nx (real) ∈ [-1, 1/2]\nk (int) in [0.5, 9.5]\nf (float32)\n\nNVC:\n"
      "assert (<= x 1)\nassert\n  (and (<= 0 k)\n       (<= k 3))\n");
  ASSERT_EQ(nvc.vars.size(), 3u);
  EXPECT_EQ(nvc.vars[0].bounds.hi(), Scalar(1, 2));
  EXPECT_EQ(nvc.vars[1].bounds.lo(), Scalar(1));
  EXPECT_EQ(nvc.vars[1].bounds.hi(), Scalar(9));
  EXPECT_TRUE(nvc.vars[2].bounds.is_entire());
  EXPECT_EQ(report.kept, 2u);
}

TEST(Corpus, DropsUnsupportedAssertionsButKeepsTheRest) {
  auto [nvc, report] = parse_corpus("x (real)\nassert (<= x 1)\nassert (<= (frobnicate x) 1)\n");
  EXPECT_EQ(report.kept, 1u);
  ASSERT_EQ(report.dropped.size(), 1u);
  EXPECT_EQ(report.dropped[0].index, 1u);
  EXPECT_THROW(parse_corpus("x (real)\nassert (<= (frobnicate x) 1)\n"), NoAssertions);
  EXPECT_THROW(parse_corpus("x (real)\n"), NoAssertions);
}

TEST(Corpus, WriteThenParseIsStable) {
  auto [nvc, report] = load_nvc(corpus_path("sin_ge.nvc"));
  std::string text = write_corpus(nvc);
  auto [again, r2] = parse_corpus(text);
  EXPECT_EQ(write_corpus(again), text);
  EXPECT_EQ(again.assertions.size(), nvc.assertions.size());
}

TEST(Corpus, SmtLibAndCorpusFormsAgree) {
  auto [a, ra] = load_nvc(corpus_path("taylor_sin.smt2"));
  auto [b, rb] = load_nvc(corpus_path("taylor_sin.nvc"));
  ProcessedNVC sa = simplify_and_bound(a), sb = simplify_and_bound(b);
  ASSERT_EQ(sa.assertions.size(), sb.assertions.size());
  for (std::size_t i = 0; i < sa.assertions.size(); ++i) EXPECT_EQ(to_sexpr(sa.assertions[i]), to_sexpr(sb.assertions[i]));
}

TEST(Corpus, EveryFileLoads) {
  for (const char* name : {"approx_sin_le.nvc", "heron_init.nvc", "my_machine_rounding_le.nvc", "reduce_half_pi_le.nvc",
                           "sin_ge.nvc", "taylor_sin.nvc", "taylor_sin.smt2", "taylor_sin_loose.nvc",
                           "taylor_sin_plus.nvc", "taylor_sin_swap.nvc", "taylor_sin_tight.nvc"}) {
    EXPECT_NO_THROW(load_nvc(corpus_path(name))) << name;
  }
}
