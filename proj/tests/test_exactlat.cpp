#include "oracles.hpp"

#include "toralab/exactlat.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace toralab;

TEST(MatPow, SmallPowers) {
  EXPECT_EQ(mat_pow(oracle::cat, 2), (IntMatrix2{5, 3, 3, 2}));
  EXPECT_EQ(mat_pow(oracle::cat, 0), IntMatrix2::identity());
  EXPECT_EQ(mat_pow(oracle::cat, 5).trace(), 123);
}

TEST(MatPow, TraceMatchesRecurrence) {
  for (const auto& m : oracle::hyperbolic_matrices())
    for (unsigned long n = 0; n <= 60; ++n) EXPECT_EQ(mat_pow(m, n).trace(), oracle::trace_by_recurrence(m, n)) << n;
}

TEST(MatPow, NoOverflowPastWordSize) {
  // t_100 for the cat map has 42 digits
  IntMatrix2 p = mat_pow(oracle::cat, 100);
  EXPECT_EQ(p.det(), 1);
  EXPECT_EQ(p.trace(), oracle::trace_by_recurrence(oracle::cat, 100));
  EXPECT_GT(p.trace(), Integer("100000000000000000000000000000000000000000"));
}

TEST(MatrixLiteral, ParseAndPrint) {
  EXPECT_EQ(parse_matrix("2 1 1 1"), oracle::cat);
  EXPECT_EQ(parse_matrix("[[3, 2], [1, 1]]"), (IntMatrix2{3, 2, 1, 1}));
  EXPECT_EQ(to_string(IntMatrix2{-1, 2, 3, 4}), "-1 2 3 4");
  EXPECT_THROW(parse_matrix("1 2 3"), domain_error);
  EXPECT_THROW(parse_matrix("1 2 3 4 5"), domain_error);
  EXPECT_THROW(parse_matrix("1 2 x 4"), domain_error);
}

TEST(Rationals, ParseForms) {
  EXPECT_EQ(parse_rational("3/4"), Rational(3, 4));
  EXPECT_EQ(parse_rational("0.001"), Rational(1, 1000));
  EXPECT_EQ(parse_rational("1e-3"), Rational(1, 1000));
  EXPECT_EQ(parse_rational("-2.5"), Rational(-5, 2));
  EXPECT_THROW(parse_rational("1/0"), domain_error);
  EXPECT_THROW(parse_rational("abc"), domain_error);
}

namespace {

void expect_valid_snf(const IntMatrix2& m) {
  SmithDecomposition s = smith_normal_form(m);
  EXPECT_EQ(s.U * m * s.V, s.diagonal()) << to_string(m);
  EXPECT_TRUE(abs(s.U.det()) == 1 && abs(s.V.det()) == 1);
  EXPECT_GE(s.d1, 1);
  EXPECT_GE(s.d2, 0);
  EXPECT_EQ(s.d2 % s.d1, 0);
  EXPECT_EQ(s.d1 * s.d2, abs(m.det()));
}

}  // namespace

TEST(SmithNormalForm, Examples) {
  SmithDecomposition a = smith_normal_form({1, 1, 1, 0});
  EXPECT_EQ(a.d1, 1);
  EXPECT_EQ(a.d2, 1);
  SmithDecomposition b = smith_normal_form({3, 1, 1, 2});
  EXPECT_EQ(b.d1, 1);
  EXPECT_EQ(b.d2, 5);
  SmithDecomposition c = smith_normal_form({2, 0, 0, 2});
  EXPECT_EQ(c.d1, 2);
  EXPECT_EQ(c.d2, 2);
  for (auto m : {IntMatrix2{1, 1, 1, 0}, IntMatrix2{3, 1, 1, 2}, IntMatrix2{2, 0, 0, 2}}) expect_valid_snf(m);
}

TEST(SmithNormalForm, TerminatesWhenPivotDividesEntries) {
  // equal-magnitude entries used to cycle the gcd steps
  for (auto m : {IntMatrix2{12, 8, 8, 4}, IntMatrix2{2, -2, 2, 2}, IntMatrix2{88, 55, 55, 33}, IntMatrix2{0, 3, 0, 6}})
    expect_valid_snf(m);
  EXPECT_EQ(smith_normal_form({12, 8, 8, 4}).d2, 4);
}

TEST(SmithNormalForm, RejectsZero) { EXPECT_THROW(smith_normal_form({0, 0, 0, 0}), domain_error); }

TEST(SmithNormalForm, Deterministic) {
  IntMatrix2 m{12, -7, 30, 4};
  SmithDecomposition a = smith_normal_form(m), b = smith_normal_form(m);
  EXPECT_EQ(a.U, b.U);
  EXPECT_EQ(a.V, b.V);
}

TEST(SmithNormalForm, RandomRoundTrip) {
  std::mt19937_64 rng(20240611);
  int checked = 0;
  while (checked < 1000) {
    auto draw = [&] { return Integer(static_cast<long>(rng() % 101) - 50); };
    IntMatrix2 m{draw(), draw(), draw(), draw()};
    if (m.is_zero()) continue;
    expect_valid_snf(m);
    ++checked;
  }
}

TEST(SmithNormalForm, SingularMatrix) {
  SmithDecomposition s = smith_normal_form({2, 4, 1, 2});
  EXPECT_EQ(s.d1, 1);
  EXPECT_EQ(s.d2, 0);
  EXPECT_EQ(s.U * IntMatrix2({2, 4, 1, 2}) * s.V, s.diagonal());
}

TEST(QuadNumber, FieldOperations) {
  QuadNumber r5 = QuadNumber::sqrt_of(5);
  QuadNumber phi = (QuadNumber(1) + r5) / 2;
  EXPECT_EQ(phi * phi, phi + 1);
  EXPECT_EQ(phi * phi.inverse(), QuadNumber(1));
  EXPECT_EQ(r5 * r5, QuadNumber(5));
  EXPECT_THROW(QuadNumber(0).inverse(), domain_error);
  EXPECT_THROW(QuadNumber::sqrt_of(9), domain_error);
  EXPECT_THROW(r5 + QuadNumber::sqrt_of(2), domain_error);
}

TEST(QuadNumber, OrderingIsExact) {
  QuadNumber r2 = QuadNumber::sqrt_of(2);
  EXPECT_LT(QuadNumber(Rational(141421356, 100000000)), r2);
  EXPECT_GT(QuadNumber(Rational(141421357, 100000000)), r2);
  EXPECT_EQ((r2 - QuadNumber(Rational(3, 2))).sign(), -1);
  EXPECT_EQ((QuadNumber(Rational(3, 2)) - r2).sign(), 1);
  EXPECT_EQ(r2.floor(), 1);
  EXPECT_EQ((-r2).floor(), -2);
  // far outside long double: floor((1+sqrt 5)/2)^400 still exact
  QuadNumber phi = (QuadNumber(1) + QuadNumber::sqrt_of(5)) / 2;
  QuadNumber big = pow(phi, 400);
  Integer f = big.floor();
  EXPECT_LE(QuadNumber(Rational(f)), big);
  EXPECT_GT(QuadNumber(Rational(f + 1)), big);
}

TEST(QuadEigen, CatMap) {
  EigenData e = quad_eigen(oracle::cat);
  QuadNumber expected = (QuadNumber(3) + QuadNumber::sqrt_of(5)) / 2;
  EXPECT_EQ(e.lambda, expected);
  EXPECT_EQ(e.lambda + e.lambda_inv, QuadNumber(3));
  EXPECT_EQ(e.lambda * e.lambda_inv, QuadNumber(1));
  EXPECT_EQ(oracle::cat * e.v_u, e.lambda * e.v_u);
  EXPECT_EQ(oracle::cat * e.v_s, e.lambda_inv * e.v_s);
}

TEST(QuadEigen, TraceFour) {
  EigenData e = quad_eigen({3, 2, 1, 1});
  EXPECT_EQ(e.lambda.disc(), 12);
  EXPECT_EQ(e.lambda, QuadNumber(2) + QuadNumber::sqrt_of(12) / 2);  // 2 + sqrt 3
  EXPECT_EQ(e.lambda * e.lambda - 4 * e.lambda + 1, QuadNumber(0));
}

TEST(QuadEigen, RejectsNonHyperbolic) {
  EXPECT_THROW(quad_eigen({1, 1, 0, 1}), domain_error);    // parabolic
  EXPECT_THROW(quad_eigen({-2, 1, 1, -1}), domain_error);  // trace -3
  EXPECT_THROW(quad_eigen({2, 1, 1, 0}), domain_error);    // det -1
}

TEST(QuadEigen, Invariants) {
  for (const auto& m : oracle::hyperbolic_matrices()) {
    EigenData e = quad_eigen(m);
    EXPECT_EQ(m * e.v_u, e.lambda * e.v_u);
    EXPECT_EQ(m * e.v_s, e.lambda_inv * e.v_s);
    EXPECT_EQ(e.basis * e.basis_inv, QuadMatrix2::identity());
    EXPECT_EQ(e.basis_inv * e.basis, QuadMatrix2::identity());
    EXPECT_GT(e.lambda, QuadNumber(1));
    for (unsigned long n = 0; n <= 20; ++n) {
      QuadNumber sum = pow(e.lambda, static_cast<long>(n)) + pow(e.lambda_inv, static_cast<long>(n));
      EXPECT_EQ(sum, QuadNumber(Rational(mat_pow(m, n).trace()))) << n;
    }
  }
}

TEST(QuadEigen, ShadowingConstantForCatMap) {
  EigenData e = quad_eigen(oracle::cat);
  // 1/(lambda-1) + 1/(1-lambda^-1) = sqrt 5 for the golden case
  QuadNumber factor = (e.lambda - 1).inverse() + (QuadNumber(1) - e.lambda_inv).inverse();
  EXPECT_EQ(factor, QuadNumber::sqrt_of(5));
  EXPECT_NEAR(static_cast<double>(e.shadowing_constant().to_long_double() / factor.to_long_double()),
              static_cast<double>(e.distortion().to_long_double()), 1e-12);
  EXPECT_GE(e.distortion(), QuadNumber(1));
}
