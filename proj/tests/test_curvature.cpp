#include <gtest/gtest.h>

#include "hyperfiber/curvature.hpp"

using namespace hyperfiber;

namespace {

using C = Complex<Exact>;

Exact q(long p, long d = 1) { return ScalarTraits<Exact>::from_ratio(p, d); }

}  // namespace

class CurvatureByModel : public ::testing::TestWithParam<std::tuple<int, int>> {};

TEST_P(CurvatureByModel, GeneratorContract) {
  const auto [n, r] = GetParam();
  FiberModel<Exact> M(n);
  Rng rng = derive_rng(21, n, r);
  for (int t = 0; t < 3; ++t) {
    auto theta = random_invariant_ym_curvature(M, r, rng);
    auto c = check_curvature(M, theta, r);
    EXPECT_TRUE(c.invariant);
    EXPECT_TRUE(c.lambda_zero);
    EXPECT_TRUE(c.real);
    EXPECT_TRUE(c.traceless);
    EXPECT_TRUE(lambda_endo(theta, r).is_zero());
  }
}

TEST_P(CurvatureByModel, HodgeRiemannRatio) {
  const auto [n, r] = GetParam();
  FiberModel<Exact> M(n);
  KahlerData<Exact> kd(M);
  Rng rng = derive_rng(22, n, r);
  const Exact expected = Exact(factorial(2 * n - 2));
  for (int t = 0; t < 3; ++t) {
    auto hr = hodge_riemann_check(kd, random_invariant_ym_curvature(M, r, rng), r);
    ASSERT_TRUE(hr.has_value());
    EXPECT_EQ(hr->ratio, expected);
  }
}

TEST_P(CurvatureByModel, ChernDensities) {
  const auto [n, r] = GetParam();
  FiberModel<Exact> M(n);
  Rng rng = derive_rng(23, n, r);
  auto su = chern_integrands(random_invariant_ym_curvature(M, r, rng), r);
  EXPECT_TRUE(su.c1_density.is_zero());
  auto u = chern_integrands(random_invariant_ym_curvature(M, r, rng, false), r);
  EXPECT_TRUE(is_real(u.c1_density));
}

INSTANTIATE_TEST_SUITE_P(Grid, CurvatureByModel,
                         ::testing::Combine(::testing::Values(1, 2), ::testing::Values(2, 3)));

TEST(Curvature, RankOneTracelessIsZero) {
  FiberModel<Exact> M(2);
  Rng rng = derive_rng(1, 1, 1);
  EXPECT_TRUE(random_invariant_ym_curvature(M, 1, rng).is_zero());
  EXPECT_THROW(random_invariant_ym_curvature(M, 5, rng), ConfigError);
}

TEST(Curvature, HodgeRiemannPreconditions) {
  FiberModel<Exact> M(1);
  KahlerData<Exact> kd(M);
  EXPECT_FALSE(hodge_riemann_check(kd, BundleForm<Exact>(2), 2).has_value());
  BundleForm<Exact> bad(2);
  bad.add_term(mixed_mask(2, 0, 0), C::i() * CMatrix<Exact>::identity(2));
  EXPECT_THROW(hodge_riemann_check(kd, bad, 2), PreconditionError);
}

class Lemma52Oracle : public ::testing::TestWithParam<int> {};

TEST_P(Lemma52Oracle, BFormulaAndPositivity) {
  const int r = GetParam();
  FiberModel<Exact> M(2);
  KahlerData<Exact> kd(M);
  Rng rng = derive_rng(52, 2, r);
  for (int t = 0; t < 3; ++t) {
    auto theta = random_invariant_ym_curvature(M, r, rng);
    auto Bd = b_coefficients(kd, theta, r, BMethod::direct);
    auto Bf = b_coefficients(kd, theta, r, BMethod::formula);
    for (int i = 0; i < 4; ++i) {
      EXPECT_EQ(Bd(i, i), Bf(i, i));
      EXPECT_GE(sgn(Bd(i, i).re), 0);
      auto c = c_ii(theta, r, i);
      EXPECT_EQ(c.definition, c.final_form);
      EXPECT_EQ(c.definition, c.intermediate);
      EXPECT_GE(sgn(c.definition.re), 0);
    }
    auto A = curvature_blocks(theta, r);
    EXPECT_EQ(A[0][0], -A[1][1]);
    EXPECT_EQ(A[2][2], -A[3][3]);
    EXPECT_TRUE(is_positive_codim1(kd, wedge(r2(theta), kd.omega_I())));
  }
}

INSTANTIATE_TEST_SUITE_P(Ranks, Lemma52Oracle, ::testing::Values(2, 3));

TEST(Curvature, SymplecticPartner) {
  EXPECT_EQ(symplectic_partner(0), 1);
  EXPECT_EQ(symplectic_partner(3), 2);
}

TEST(Subbundle, ZeroSecondFormRestricts) {
  FiberModel<Exact> M(1);
  Rng rng = derive_rng(9, 0, 0);
  auto theta = random_invariant_ym_curvature(M, 3, rng, false);
  auto a = random_second_form<Exact>(2, 2, 1, rng);
  for (auto& m : a.A) m = CMatrix<Exact>(1, 2);
  EXPECT_EQ(subbundle_curvature(theta, a), restrict_to_sub(theta, 2));
}

TEST(Subbundle, TraceIdentityAndGramPositivity) {
  FiberModel<Exact> M(1);
  KahlerData<Exact> kd(M);
  Rng rng = derive_rng(9, 1, 0);
  auto a = random_second_form<Exact>(2, 1, 1, rng);
  BundleForm<Exact> zero(2);
  auto tp = subbundle_curvature(zero, a);
  EXPECT_EQ(-trace_form(tp), trace_form(a_wedge_aperp(a)));
  EXPECT_TRUE(is_positive_11(C::i() * trace_form(a_wedge_aperp(a))));
  EXPECT_THROW(subbundle_curvature(BundleForm<Exact>(4), a), ModelMismatch);
}

TEST(Killing, SignFacts) {
  Rng rng = derive_rng(4, 4, 4);
  for (int t = 0; t < 10; ++t) {
    CMatrix<Exact> A(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) A(i, j) = random_complex<Exact>(rng);
    EXPECT_GE(sgn(trace_of_product(A, A.adjoint()).re), 0);
    auto X = A - A.adjoint();
    auto tx = trace_of_product(X, X);
    EXPECT_LE(sgn(tx.re), 0);
    EXPECT_EQ(tx.im, q(0));
  }
}
