#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "hyperfiber/errors.hpp"
#include "hyperfiber/fiber_model.hpp"
#include "hyperfiber/form.hpp"
#include "hyperfiber/kahler.hpp"
#include "hyperfiber/matrix.hpp"
#include "hyperfiber/rng.hpp"
#include "hyperfiber/su2_decomp.hpp"

namespace hyperfiber {

// Curvature convention: Theta = sqrt(-1) sum_{k,l} z_k ^ zbar_l (x) A_kl with
// A_lk = -A_kl^dagger. Diagonal blocks A_kk are anti-Hermitian and Theta is a
// real u(r)-valued 2-form.

inline Mask mixed_mask(int N, int k, int l) { return (Mask(1) << k) | (Mask(1) << (N + l)); }

template <class S>
std::size_t bundle_rank(const BundleForm<S>& theta) {
  if (theta.is_zero()) return 0;
  return theta.terms().begin()->second.rows();
}

/// A_kl = -sqrt(-1) * (coefficient of z_k ^ zbar_l); r x r zero if absent.
template <class S>
CMatrix<S> curvature_block(const BundleForm<S>& theta, int k, int l, std::size_t r) {
  const CMatrix<S>* c = theta.find(mixed_mask(theta.N(), k, l));
  if (!c) return CMatrix<S>(r, r);
  return -Complex<S>::i() * *c;
}

template <class S>
std::vector<std::vector<CMatrix<S>>> curvature_blocks(const BundleForm<S>& theta, std::size_t r) {
  const int N = theta.N();
  std::vector<std::vector<CMatrix<S>>> A(N, std::vector<CMatrix<S>>(N));
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l) A[k][l] = curvature_block(theta, k, l, r);
  return A;
}

template <class S>
BundleForm<S> curvature_from_blocks(int N, const std::vector<std::vector<CMatrix<S>>>& A) {
  BundleForm<S> theta(N);
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l) theta.add_term(mixed_mask(N, k, l), Complex<S>::i() * A[k][l]);
  return theta;
}

/// Remove the trace of every coefficient (u(r) -> su(r)).
template <class S>
BundleForm<S> traceless_part(const BundleForm<S>& theta) {
  return theta.map_coeffs([](const CMatrix<S>& c) {
    const std::size_t r = c.rows();
    Complex<S> t = c.trace() * Complex<S>(S(S(1) / S(static_cast<long>(r))));
    return c - CMatrix<S>::identity(r) * t;
  });
}

/// Random SU(2)-invariant curvature: Gaussian-integer blocks, made skew
/// (A_lk = -A_kl^dagger), averaged over I, J, K on the form part and
/// optionally made traceless. Lambda Theta = 0 follows from invariance.
template <class S>
BundleForm<S> random_invariant_ym_curvature(const FiberModel<S>& model, int r, Rng& rng, bool traceless = true,
                                            long bound = 3) {
  if (r < 1 || r > 4) throw ConfigError("random_invariant_ym_curvature: rank must be in 1..4");
  const int N = model.N();
  std::vector<std::vector<CMatrix<S>>> raw(N, std::vector<CMatrix<S>>(N));
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l) {
      raw[k][l] = CMatrix<S>(r, r);
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) raw[k][l](a, b) = random_gaussian_int<S>(rng, bound);
    }
  const Complex<S> half(ScalarTraits<S>::from_ratio(1, 2));
  std::vector<std::vector<CMatrix<S>>> A(N, std::vector<CMatrix<S>>(N));
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l) A[k][l] = half * (raw[k][l] - raw[l][k].adjoint());
  BundleForm<S> theta = invariant_projection(model, curvature_from_blocks(N, A));
  return traceless ? traceless_part(theta) : theta;
}

/// Generator contract, each item checked independently.
struct CurvatureContract {
  bool invariant = false;
  bool lambda_zero = false;
  bool real = false;
  bool traceless = false;
};

/// Lambda Theta = sum_k A_kk.
template <class S>
CMatrix<S> lambda_endo(const BundleForm<S>& theta, std::size_t r, double tol = kDefaultTolerance) {
  const int N = theta.N();
  const double scale = max_abs_coeff(theta);
  for (const auto& [m, c] : theta.terms())
    if (popcount(m) != 2) throw DegreeError("lambda_endo: expected a 2-form");
    else if (bidegree(m, N) != std::make_pair(1, 1) && !near_zero(c, tol, scale))
      throw TypeError("lambda_endo: curvature is not of type (1,1)_I");
  CMatrix<S> s(r, r);
  for (int k = 0; k < N; ++k) s += curvature_block(theta, k, k, r);
  return s;
}

template <class S>
CurvatureContract check_curvature(const FiberModel<S>& model, const BundleForm<S>& theta, std::size_t r,
                                  double tol = kDefaultTolerance) {
  CurvatureContract c;
  const int N = model.N();
  c.invariant = near(model.act_I(theta), theta, tol) && near(model.act_J(theta), theta, tol) &&
                near(model.act_K(theta), theta, tol);
  c.lambda_zero = near_zero(lambda_endo(theta, r, tol), tol, max_abs_coeff(theta));
  auto A = curvature_blocks(theta, r);
  c.real = true;
  c.traceless = true;
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l) {
      if (!near(A[l][k], -A[k][l].adjoint(), tol)) c.real = false;
      if (!near_zero(A[k][l].trace(), tol, max_abs(A[k][l]))) c.traceless = false;
    }
  for (const auto& [m, coeff] : theta.terms())
    if (bidegree(m, N) != std::make_pair(1, 1)) c.real = false;
  return c;
}

/// Scalar form Tr(F) of a bundle-valued form.
template <class S>
Form<S> trace_form(const BundleForm<S>& f) {
  Form<S> out(f.N());
  for (const auto& [m, c] : f.terms()) out.add_term(m, c.trace());
  return out;
}

/// r_2 = Tr(Theta ^ Theta), computed without forming the matrix products.
template <class S>
Form<S> r2(const BundleForm<S>& theta) {
  Form<S> out(theta.N());
  for (const auto& [m1, c1] : theta.terms())
    for (const auto& [m2, c2] : theta.terms()) {
      int s = wedge_sign(m1, m2);
      if (s == 0) continue;
      Complex<S> t = trace_of_product(c1, c2);
      out.add_term(m1 | m2, s < 0 ? -t : t);
    }
  return out;
}

enum class BMethod { direct, formula };

/// Coefficients of r_2 ^ omega^{N-3} in the basis w_ij = (all z but z_i) ^
/// (all zbar but zbar_j), with w_ij oriented so that w_ii ^ sqrt(-1) z_i ^ zbar_i
/// is a positive multiple of Vol. The formula method fills the diagonal only:
///   B_ii = (N-3)! [ -sum Tr(A_kl A_lk) + sum Tr(A_kk A_ll) ],  k != l, k,l != i.
template <class S>
CMatrix<S> b_coefficients(const KahlerData<S>& kd, const BundleForm<S>& theta, std::size_t r, BMethod method) {
  const int N = kd.N();
  if (N < 3) throw PreconditionError("b_coefficients: requires complex dimension N >= 3");
  CMatrix<S> B(N, N);
  if (method == BMethod::direct) {
    const Form<S> nu = wedge(r2(theta), power(kd.omega_I(), N - 3));
    const Mask lo = (Mask(1) << N) - 1;
    const Complex<S> i = Complex<S>::i();
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) {
        Mask mu = (lo & ~(Mask(1) << a)) | ((lo & ~(Mask(1) << b)) << N);
        Form<S> w = Form<S>::monomial(N, mu, Complex<S>(1));
        Complex<S> t = kd.vol_coefficient(i * wedge(w, wedge(z<S>(N, a), zbar<S>(N, b))));
        B(a, b) = nu.coeff(mu) * t;
      }
    return B;
  }
  const auto A = curvature_blocks(theta, r);
  const Complex<S> f(ScalarTraits<S>::from_int(factorial(N - 3)));
  for (int i = 0; i < N; ++i) {
    Complex<S> s1, s2;
    for (int k = 0; k < N; ++k)
      for (int l = 0; l < N; ++l) {
        if (k == l || k == i || l == i) continue;
        s1 += trace_of_product(A[k][l], A[l][k]);
        s2 += trace_of_product(A[k][k], A[l][l]);
      }
    B(i, i) = f * (s2 - s1);
  }
  return B;
}

/// Symplectic partner of index i (0-based pairs (0,1), (2,3), ...).
inline int symplectic_partner(int i) { return i ^ 1; }

template <class S>
struct CiiResult {
  Complex<S> definition;    // sum_{k != l; k,l != i} Tr(A_kk A_ll)
  Complex<S> intermediate;  // -sum_k Tr(A_kk^2) + 2 Tr(A_ii^2)
  Complex<S> final_form;    // -sum_{k != i, partner(i)} Tr(A_kk^2)
};

template <class S>
CiiResult<S> c_ii(const BundleForm<S>& theta, std::size_t r, int i) {
  const int N = theta.N();
  if (i < 0 || i >= N) throw std::out_of_range("c_ii: index out of range");
  const auto A = curvature_blocks(theta, r);
  CiiResult<S> c;
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l)
      if (k != l && k != i && l != i) c.definition += trace_of_product(A[k][k], A[l][l]);
  Complex<S> sq_all;
  for (int k = 0; k < N; ++k) {
    Complex<S> sq = trace_of_product(A[k][k], A[k][k]);
    sq_all += sq;
    if (k != i && k != symplectic_partner(i)) c.final_form -= sq;
  }
  c.intermediate = Complex<S>(2) * trace_of_product(A[i][i], A[i][i]) - sq_all;
  return c;
}

/// |Theta|^2 = sum_{k,l} Tr(A_kl A_kl^dagger).
template <class S>
S curvature_norm2(const BundleForm<S>& theta) {
  S s(0);
  for (const auto& [m, c] : theta.terms()) s += c.frobenius2();
  return s;
}

template <class S>
struct HodgeRiemann {
  S pairing;  // [Tr(Theta ^ Theta) ^ omega^{N-2}]_Vol
  S norm2;
  S ratio;
};

/// Pointwise Hodge-Riemann relation for primitive curvature; nullopt for the
/// degenerate sample Theta = 0.
template <class S>
std::optional<HodgeRiemann<S>> hodge_riemann_check(const KahlerData<S>& kd, const BundleForm<S>& theta,
                                                   std::size_t r, double tol = kDefaultTolerance) {
  if (!near_zero(lambda_endo(theta, r, tol), tol, max_abs_coeff(theta)))
    throw PreconditionError("hodge_riemann_check: Lambda Theta != 0");
  HodgeRiemann<S> h;
  h.norm2 = curvature_norm2(theta);
  if (ScalarTraits<S>::near_zero(h.norm2, tol, 1.0)) return std::nullopt;
  Complex<S> p = kd.vol_coefficient(wedge(r2(theta), power(kd.omega_I(), kd.N() - 2)));
  if (!ScalarTraits<S>::near_zero(p.im, tol, ScalarTraits<S>::to_double(p.re)))
    throw ConventionError("hodge_riemann_check: pairing is not real");
  h.pairing = p.re;
  h.ratio = h.pairing / h.norm2;
  return h;
}

/// Second fundamental form A = sum_k z_k (x) A_k, A_k : F/F' -> F' written as
/// r'' x r' matrices; A_perp = sum_k zbar_k (x) A_k^dagger.
template <class S>
struct SecondForm {
  int N = 0;
  std::size_t sub_rank = 0;    // r'
  std::size_t quot_rank = 0;   // r''
  std::vector<CMatrix<S>> A;   // N matrices, quot_rank x sub_rank
};

template <class S>
SecondForm<S> random_second_form(int N, std::size_t sub_rank, std::size_t quot_rank, Rng& rng, long bound = 3) {
  SecondForm<S> a{N, sub_rank, quot_rank, {}};
  for (int k = 0; k < N; ++k) {
    CMatrix<S> m(quot_rank, sub_rank);
    for (std::size_t i = 0; i < quot_rank; ++i)
      for (std::size_t j = 0; j < sub_rank; ++j) m(i, j) = random_gaussian_int<S>(rng, bound);
    a.A.push_back(std::move(m));
  }
  return a;
}

template <class S>
bool is_zero(const SecondForm<S>& a) {
  for (const auto& m : a.A)
    if (!m.is_zero()) return false;
  return true;
}

/// A ^ A_perp = sum_{k,l} z_k ^ zbar_l (x) A_l^dagger A_k (an r' x r' form).
template <class S>
BundleForm<S> a_wedge_aperp(const SecondForm<S>& a) {
  BundleForm<S> out(a.N);
  for (int k = 0; k < a.N; ++k)
    for (int l = 0; l < a.N; ++l) out.add_term(mixed_mask(a.N, k, l), a.A[l].adjoint() * a.A[k]);
  return out;
}

/// Curvature of the sub-bundle F' (the first r' coordinates):
/// Theta' = Theta|_{F'} - A ^ A_perp.
template <class S>
BundleForm<S> subbundle_curvature(const BundleForm<S>& theta, const SecondForm<S>& a) {
  if (theta.N() != a.N) throw ModelMismatch("subbundle_curvature: model mismatch");
  const std::size_t r1 = a.sub_rank;
  for (const auto& m : a.A)
    if (m.rows() != a.quot_rank || m.cols() != r1) throw std::invalid_argument("subbundle_curvature: bad A shape");
  BundleForm<S> restricted = theta.map_coeffs([&](const CMatrix<S>& c) {
    if (c.rows() != r1 + a.quot_rank) throw std::invalid_argument("subbundle_curvature: rank mismatch");
    return c.block(0, 0, r1, r1);
  });
  return restricted - a_wedge_aperp(a);
}

template <class S>
BundleForm<S> restrict_to_sub(const BundleForm<S>& theta, std::size_t r1) {
  return theta.map_coeffs([&](const CMatrix<S>& c) { return c.block(0, 0, r1, r1); });
}

/// Chern-Weil densities: c1 = (sqrt(-1)/2pi) Tr Theta and the discriminant
/// (1/4pi^2) (Tr(Theta^Theta) - (1/r) Tr Theta ^ Tr Theta). The forms are
/// returned without the transcendental factors, which are reported separately.
template <class S>
struct ChernIntegrands {
  Form<S> c1_density;    // sqrt(-1) Tr Theta
  Form<S> disc_density;  // r_2 - (1/r) Tr Theta ^ Tr Theta
  double c1_normalization = 1.0 / (2.0 * std::numbers::pi);
  double disc_normalization = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);
};

template <class S>
ChernIntegrands<S> chern_integrands(const BundleForm<S>& theta, std::size_t r) {
  ChernIntegrands<S> c;
  const Form<S> tr = trace_form(theta);
  c.c1_density = Complex<S>::i() * tr;
  const Complex<S> inv_r(S(S(1) / S(static_cast<long>(r))));
  c.disc_density = r2(theta) - inv_r * wedge(tr, tr);
  return c;
}

}  // namespace hyperfiber
