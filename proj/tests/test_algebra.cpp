#include <gtest/gtest.h>

#include "hyperfiber/fiber_model.hpp"
#include "hyperfiber/form.hpp"
#include "hyperfiber/kahler.hpp"
#include "hyperfiber/quaternion.hpp"
#include "hyperfiber/su2_decomp.hpp"

using namespace hyperfiber;

namespace {

using Q = Quaternion<Exact>;
using C = Complex<Exact>;

Exact q(long p, long d = 1) { return ScalarTraits<Exact>::from_ratio(p, d); }

Form<Exact> zzb(int N, int k, int l) { return wedge(z<Exact>(N, k), zbar<Exact>(N, l)); }

}  // namespace

TEST(Quaternion, HamiltonRelations) {
  EXPECT_EQ(Q::i() * Q::j(), Q::k());
  EXPECT_EQ(Q::j() * Q::k(), Q::i());
  EXPECT_EQ(Q::k() * Q::i(), Q::j());
  EXPECT_EQ(Q::j() * Q::i(), -Q::k());
  EXPECT_EQ(Q::i() * Q::j() * Q::k(), -Q::one());
}

TEST(Quaternion, ConjugateAndNorm) {
  Q a(q(1), q(2), q(-3), q(4));
  EXPECT_EQ(a * a.conj(), Q(a.norm2(), q(0), q(0), q(0)));
  EXPECT_EQ(a.norm2(), q(30));
}

TEST(Quaternion, UnitValidation) {
  EXPECT_THROW(UnitQuaternion<Exact>(Q(q(1), q(1), q(0), q(0))), std::invalid_argument);
  EXPECT_NO_THROW(UnitQuaternion<Exact>(Q(q(3, 5), q(4, 5), q(0), q(0))));
  EXPECT_THROW(InducedStructure<Exact>(q(1), q(1), q(0)), std::invalid_argument);
}

TEST(Quaternion, RotationKToI) {
  auto g = rotation_K_to_I<Exact>();
  EXPECT_EQ(conjugate_structure(g, InducedStructure<Exact>::K()), InducedStructure<Exact>::I());
  EXPECT_EQ(conjugate_structure(g, InducedStructure<Exact>::I()), InducedStructure<Exact>::J());
  EXPECT_EQ(conjugate_structure(g, InducedStructure<Exact>::J()), InducedStructure<Exact>::K());
}

TEST(Quaternion, RandomSamplesAreUnit) {
  Rng rng = derive_rng(7, 1, 0);
  for (int t = 0; t < 50; ++t) {
    EXPECT_EQ(random_unit_quaternion<Exact>(rng).quat().norm2(), q(1));
    auto L = random_induced_structure<Exact>(rng);
    EXPECT_EQ(L.a() * L.a() + L.b() * L.b() + L.c() * L.c(), q(1));
  }
}

TEST(Form, WedgeSigns) {
  const int N = 2;
  auto a = z<Exact>(N, 0), b = z<Exact>(N, 1);
  EXPECT_EQ(wedge(a, b), -wedge(b, a));
  EXPECT_TRUE(wedge(a, a).is_zero());
  EXPECT_EQ(wedge(zzb(N, 0, 0), zzb(N, 1, 1)), wedge(zzb(N, 1, 1), zzb(N, 0, 0)));
}

TEST(Form, ConjugationSwapsTypes) {
  const int N = 2;
  auto f = C(q(2), q(1)) * wedge(z<Exact>(N, 0), z<Exact>(N, 1));
  auto g = conj(f);
  EXPECT_EQ(g, C(q(2), q(-1)) * wedge(zbar<Exact>(N, 0), zbar<Exact>(N, 1)));
  EXPECT_TRUE(is_real(C::i() * zzb(N, 0, 0)));
  EXPECT_FALSE(is_real(zzb(N, 0, 0)));
}

TEST(Form, MaskNames) { EXPECT_EQ(mask_name(0b0101, 2), "z1^zb1"); }

TEST(FiberModel, RejectsDimension) {
  EXPECT_THROW(FiberModel<Exact>(0), ConfigError);
  EXPECT_THROW(FiberModel<Exact>(4), ConfigError);
}

TEST(FiberModel, QuaternionRelationsOnCovectors) {
  for (int n = 1; n <= 3; ++n) {
    FiberModel<Exact> M(n);
    auto one = CMatrix<Exact>::identity(M.dim());
    EXPECT_EQ(M.I() * M.I(), -one);
    EXPECT_EQ(M.J() * M.J(), -one);
    EXPECT_EQ(M.K() * M.K(), -one);
    EXPECT_EQ(M.J() * M.I(), -M.K());
  }
}

TEST(FiberModel, JDictionary) {
  FiberModel<Exact> M(2);
  const int N = 4;
  EXPECT_EQ(M.act_J(z<Exact>(N, 0)), -zbar<Exact>(N, 1));
  EXPECT_EQ(M.act_J(z<Exact>(N, 1)), zbar<Exact>(N, 0));
  EXPECT_EQ(M.act_J(zzb(N, 0, 0)), -zzb(N, 1, 1));
  EXPECT_EQ(M.act_I(z<Exact>(N, 2)), C::i() * z<Exact>(N, 2));
}

TEST(FiberModel, FaultBreaksJSquared) {
  FiberModel<Exact> M(1, true);
  EXPECT_NE(M.J() * M.J(), -CMatrix<Exact>::identity(M.dim()));
}

TEST(FiberModel, PullbackMatchesRepresentation) {
  RealModel<Exact> R(2);
  FiberModel<Exact> M(2);
  Rng rng = derive_rng(3, 3, 3);
  for (int t = 0; t < 5; ++t) {
    auto g = random_unit_quaternion<Exact>(rng);
    EXPECT_EQ(R.pullback(g), M.rho(g.quat()));
  }
}

TEST(FiberModel, HodgeTypesOfOmega) {
  FiberModel<Exact> M(1);
  KahlerData<Exact> kd(M);
  Rng rng = derive_rng(11, 0, 0);
  auto L = random_induced_structure<Exact>(rng);
  EXPECT_TRUE(is_of_type(M, kd.omega(L), L, 1, 1));
  EXPECT_TRUE(is_of_type(M, kd.Omega_K(), InducedStructure<Exact>::K(), 2, 0));
  EXPECT_FALSE(is_of_type(M, kd.omega_J(), InducedStructure<Exact>::I(), 1, 1));
}

class KahlerByN : public ::testing::TestWithParam<int> {};

TEST_P(KahlerByN, LambdaAndDegreeOracles) {
  const int n = GetParam();
  FiberModel<Exact> M(n);
  KahlerData<Exact> kd(M);
  const int N = 2 * n;
  const auto I = InducedStructure<Exact>::I();
  EXPECT_EQ(lambda2(kd, kd.omega_I(), I), C(q(N)));
  EXPECT_EQ(degree_integrand(kd, kd.omega_I(), I), Exact(factorial(N)));
  EXPECT_EQ(degree_integrand(kd, C::i() * zzb(N, 0, 0), I), Exact(factorial(N - 1)));
  Rng rng = derive_rng(5, 5, n);
  for (int t = 0; t < 3; ++t) {
    auto L = random_induced_structure<Exact>(rng);
    EXPECT_EQ(lambda2(kd, kd.omega(L), L), C(q(N)));
  }
}

TEST_P(KahlerByN, EFormConstant) {
  const int n = GetParam();
  FiberModel<Exact> M(n);
  KahlerData<Exact> kd(M);
  auto e = e_form(kd);
  ASSERT_TRUE(e.proportional);
  ASSERT_TRUE(e.c_n.has_value());
  const Exact expected[] = {q(1), q(3, 4), q(5, 8)};
  EXPECT_EQ(*e.c_n, expected[n - 1]);
  EXPECT_TRUE(e.positive);
}

TEST_P(KahlerByN, FloatBackendAgrees) {
  const int n = GetParam();
  FiberModel<Float> M(n);
  KahlerData<Float> kd(M);
  auto e = e_form(kd);
  ASSERT_TRUE(e.c_n.has_value());
  const double expected[] = {1.0, 0.75, 0.625};
  EXPECT_NEAR(*e.c_n, expected[n - 1], 1e-12);
  EXPECT_NEAR(degree_integrand(kd, kd.omega_I(), InducedStructure<Float>::I()), factorial(2 * n), 1e-9);
}

INSTANTIATE_TEST_SUITE_P(AllN, KahlerByN, ::testing::Values(1, 2, 3));

TEST(Kahler, DegreeRejectsComplexInput) {
  FiberModel<Exact> M(1);
  KahlerData<Exact> kd(M);
  EXPECT_THROW(degree_integrand(kd, zzb(2, 0, 0), InducedStructure<Exact>::I()), RealityError);
  EXPECT_THROW(lambda2(kd, z<Exact>(2, 0), InducedStructure<Exact>::I()), DegreeError);
}

TEST(Kahler, Positivity11) {
  const int N = 2;
  EXPECT_TRUE(is_positive_11(C::i() * zzb(N, 0, 0)));
  EXPECT_FALSE(is_positive_11(C(q(-1)) * C::i() * zzb(N, 0, 0)));
  EXPECT_THROW(is_positive_11(zzb(N, 0, 0)), RealityError);
  EXPECT_THROW(is_positive_11(real_part(wedge(z<Exact>(N, 0), z<Exact>(N, 1)))), TypeError);
  CMatrix<Exact> h(2, 2);
  h(0, 0) = C(q(1));
  h(1, 1) = C(q(1));
  h(0, 1) = C(q(0), q(1));
  h(1, 0) = C(q(0), q(-1));
  EXPECT_TRUE(is_positive_11(form_from_hermitian(h)));
  EXPECT_EQ(hermitian_11(form_from_hermitian(h)), h);
  h(0, 1) = C(q(2));
  h(1, 0) = C(q(2));
  EXPECT_FALSE(is_positive_11(form_from_hermitian(h)));
}

TEST(Kahler, Codim1OnOmegaPower) {
  FiberModel<Exact> M(2);
  KahlerData<Exact> kd(M);
  EXPECT_TRUE(is_positive_codim1(kd, power(kd.omega_I(), 3)));
  EXPECT_FALSE(is_positive_codim1(kd, C(q(-1)) * power(kd.omega_I(), 3)));
}

TEST(Kahler, RotatedPositivityOfOmega) {
  FiberModel<Exact> M(1);
  KahlerData<Exact> kd(M);
  auto rho = to_K20(M, kd.omega_I());
  EXPECT_TRUE(is_K_positive(kd, rho));
  auto eta = M.act(rotation_K_to_I<Exact>(), rho);
  auto s = rotated_positivity_conditions(kd, eta);
  EXPECT_TRUE(s.reality);
  EXPECT_TRUE(s.positive);
  auto neg = rotated_positivity_conditions(kd, C(q(-1)) * eta);
  EXPECT_FALSE(neg.positive);
}

TEST(Su2, ProjectionOracles) {
  FiberModel<Exact> M(1);
  KahlerData<Exact> kd(M);
  EXPECT_TRUE(invariant_projection(M, kd.omega_I()).is_zero());
  EXPECT_TRUE(invariant_projection(M, kd.omega_J()).is_zero());
  auto inv = C::i() * (zzb(2, 0, 0) - zzb(2, 1, 1));
  EXPECT_EQ(invariant_projection(M, inv), inv);
  EXPECT_TRUE(is_invariant(M, inv));
  EXPECT_FALSE(is_invariant(M, kd.omega_I()));
  EXPECT_TRUE(is_invariant(M, kd.vol()));
}

TEST(Su2, WeightSplitAndK20) {
  FiberModel<Exact> M(2);
  KahlerData<Exact> kd(M);
  auto rho = to_K20(M, kd.omega_I());
  EXPECT_EQ(rho, C(q(1, 2)) * kd.Omega_K());
  EXPECT_EQ(from_K20(M, rho), kd.omega_I());
  EXPECT_THROW(to_K20(M, C::i() * zzb(4, 0, 0)), TypeError);
  EXPECT_THROW(from_K20(M, kd.omega_I()), TypeError);
  auto w = weight_split(M, C::i() * zzb(4, 0, 0));
  EXPECT_EQ(w.eta0 + w.etaPlus, C::i() * zzb(4, 0, 0));
  EXPECT_TRUE(is_invariant(M, w.eta0));
}

TEST(Su2, Lemma26Oracle) {
  for (int n = 1; n <= 3; ++n) {
    FiberModel<Exact> M(n);
    KahlerData<Exact> kd(M);
    Rng rng = derive_rng(9, 9, n);
    auto eta = invariant_projection(M, real_part(random_form<Exact>(2 * n, 2, rng)));
    for (int t = 0; t < 3; ++t) {
      auto L = random_induced_structure<Exact>(rng);
      EXPECT_EQ(lambda2(kd, eta, L), C(q(0)));
    }
  }
}
