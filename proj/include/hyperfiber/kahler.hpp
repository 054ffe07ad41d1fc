#pragma once

#include <optional>

#include "hyperfiber/errors.hpp"
#include "hyperfiber/fiber_model.hpp"
#include "hyperfiber/form.hpp"
#include "hyperfiber/matrix.hpp"
#include "hyperfiber/quaternion.hpp"

namespace hyperfiber {

/// Kaehler forms of I, J, K, the holomorphic symplectic forms and the volume
/// form Vol = omega_I^N / N!.
template <class S>
class KahlerData {
 public:
  explicit KahlerData(const FiberModel<S>& model) : model_(model), real_(model.n()) {
    omega_I_ = real_.kahler_form(InducedStructure<S>::I());
    omega_J_ = real_.kahler_form(InducedStructure<S>::J());
    omega_K_ = real_.kahler_form(InducedStructure<S>::K());
    const Complex<S> i = Complex<S>::i();
    Omega_I_ = omega_J_ - i * omega_K_;
    Omega_K_ = omega_I_ - i * omega_J_;
    const int N = model.N();
    vol_ = Complex<S>(ScalarTraits<S>::from_ratio(1, factorial(N))) * power(omega_I_, N);
    vol_top_ = vol_.coeff(full_mask(N));
  }

  const FiberModel<S>& model() const { return model_; }
  const RealModel<S>& real_model() const { return real_; }
  int N() const { return model_.N(); }

  const Form<S>& omega_I() const { return omega_I_; }
  const Form<S>& omega_J() const { return omega_J_; }
  const Form<S>& omega_K() const { return omega_K_; }
  /// (2,0)_I and (2,0)_K holomorphic symplectic forms.
  const Form<S>& Omega_I() const { return Omega_I_; }
  const Form<S>& Omega_K() const { return Omega_K_; }
  const Form<S>& vol() const { return vol_; }

  /// Kaehler form of L computed as <., L .> on the real model.
  Form<S> omega(const InducedStructure<S>& L) const { return real_.kahler_form(L); }

  /// The scalar c with f = c * Vol (f of top degree).
  Complex<S> vol_coefficient(const Form<S>& f) const {
    model_.check(f);
    if (!f.has_degree(2 * N())) throw DegreeError("vol_coefficient: form is not of top degree");
    return f.coeff(full_mask(N())) / vol_top_;
  }

 private:
  FiberModel<S> model_;
  RealModel<S> real_;
  Form<S> omega_I_, omega_J_, omega_K_, Omega_I_, Omega_K_, vol_;
  Complex<S> vol_top_;
};

template <class S>
void require_degree(const Form<S>& f, int d, const char* what) {
  if (!f.has_degree(d)) throw DegreeError(std::string(what) + ": expected a form of degree " + std::to_string(d));
}

/// Lambda_L on 2-forms, precomputed for one induced structure. In an
/// L-adapted frame (u, v), write the (1,1)_L parts of eta and omega_L as
/// sum H_kl u_k ^ v_l and sum G_kl u_k ^ v_l; then Lambda_L eta = Tr(G^{-1} H).
/// In a unitary frame this is the trace of the Hermitian coefficient matrix.
template <class S>
class LambdaOperator {
 public:
  LambdaOperator(const KahlerData<S>& kd, const InducedStructure<S>& L)
      : N_(kd.N()), frame_(adapted_frame(kd.model(), L)) {
    CMatrix<S> G = coefficients(kd.omega(L));
    Ginv_ = inverse(G);
  }

  Complex<S> operator()(const Form<S>& eta) const {
    require_degree(eta, 2, "lambda2");
    if (eta.N() != N_) throw ModelMismatch("lambda2: form does not live on this fiber model");
    CMatrix<S> H = coefficients(eta);
    return trace_of_product(Ginv_, H);
  }

 private:
  CMatrix<S> coefficients(const Form<S>& eta) const {
    const Form<S> g = frame_.identity ? eta : apply_covector_map(frame_.to_frame, eta);
    CMatrix<S> H(N_, N_);
    for (const auto& [m, c] : g.terms()) {
      if (bidegree(m, N_) != std::make_pair(1, 1)) continue;
      int k = std::countr_zero(low_half(m, N_));
      int l = std::countr_zero(high_half(m, N_));
      H(k, l) = c;
    }
    return H;
  }

  int N_;
  AdaptedFrame<S> frame_;
  CMatrix<S> Ginv_;
};

template <class S>
Complex<S> lambda2(const KahlerData<S>& kd, const Form<S>& eta, const InducedStructure<S>& L) {
  return LambdaOperator<S>(kd, L)(eta);
}

/// eta -> lambda with eta ^ omega_L^{N-1} = lambda Vol, by direct wedge.
template <class S>
class DegreeIntegrand {
 public:
  DegreeIntegrand(const KahlerData<S>& kd, const InducedStructure<S>& L)
      : kd_(&kd), omega_pow_(power(kd.omega(L), kd.N() - 1)) {}

  Complex<S> raw(const Form<S>& eta) const {
    require_degree(eta, 2, "degree_integrand");
    return kd_->vol_coefficient(wedge(eta, omega_pow_));
  }

  S operator()(const Form<S>& eta, double tol = kDefaultTolerance) const {
    if (!is_real(eta, tol)) throw RealityError("degree_integrand: form is not real");
    return raw(eta).re;
  }

 private:
  const KahlerData<S>* kd_;
  Form<S> omega_pow_;
};

template <class S>
S degree_integrand(const KahlerData<S>& kd, const Form<S>& eta, const InducedStructure<S>& L,
                   double tol = kDefaultTolerance) {
  return DegreeIntegrand<S>(kd, L)(eta, tol);
}

/// E = Omega_K^{n-1} ^ conj(Omega_K)^n together with its (N-1,N-1)_I part and
/// the constant c_n in E^{N-1,N-1}_I = c_n^{-1} omega_I^{N-1}.
template <class S>
struct EFormResult {
  Form<S> E;
  Form<S> E_11;           // (N-1, N-1)_I component
  bool proportional = false;
  std::optional<S> c_n;   // set when proportional with a nonzero multiple
  bool positive = false;
};

template <class S>
EFormResult<S> e_form(const KahlerData<S>& kd, double tol = kDefaultTolerance) {
  const int n = kd.model().n();
  const int N = kd.N();
  EFormResult<S> r;
  r.E = wedge(power(kd.Omega_K(), n - 1), power(conj(kd.Omega_K()), n));
  r.E_11 = r.E.bidegree_part(N - 1, N - 1);
  const Form<S> base = power(kd.omega_I(), N - 1);
  // ratio from the first coefficient of the base, then check every term.
  const auto& [m0, b0] = *base.terms().begin();
  const Complex<S> ratio = r.E_11.coeff(m0) / b0;
  r.proportional = near(r.E_11, ratio * base, tol);
  if (r.proportional && !near_zero(ratio, tol)) {
    if (!near_zero(Complex<S>(ratio.im), tol)) {
      r.proportional = false;
      return r;
    }
    r.c_n = S(S(1) / ratio.re);
    r.positive = ScalarTraits<S>::sign(*r.c_n) > 0;
  }
  return r;
}

/// Hermitian matrix h of a (1,1)_I form eta = sqrt(-1) sum h_kl z_k ^ zbar_l.
template <class S>
CMatrix<S> hermitian_11(const Form<S>& eta) {
  const int N = eta.N();
  CMatrix<S> h(N, N);
  const Complex<S> mi = -Complex<S>::i();
  for (const auto& [m, c] : eta.terms()) {
    if (bidegree(m, N) != std::make_pair(1, 1)) continue;
    h(std::countr_zero(low_half(m, N)), std::countr_zero(high_half(m, N))) = mi * c;
  }
  return h;
}

/// sqrt(-1) sum h_kl z_k ^ zbar_l.
template <class S>
Form<S> form_from_hermitian(const CMatrix<S>& h) {
  const int N = static_cast<int>(h.rows());
  Form<S> f(N);
  const Complex<S> i = Complex<S>::i();
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l) f.add_term((Mask(1) << k) | (Mask(1) << (N + l)), i * h(k, l));
  return f;
}

/// Positivity of a real (1,1)_I form: the Hermitian matrix h is PSD.
template <class S>
bool is_positive_11(const Form<S>& eta, double tol = kDefaultTolerance) {
  require_degree(eta, 2, "is_positive_11");
  const double scale = max_abs_coeff(eta);
  if (!is_real(eta, tol)) throw RealityError("is_positive_11: form is not real");
  if (!near_zero(eta.bidegree_part(2, 0), tol, scale) || !near_zero(eta.bidegree_part(0, 2), tol, scale))
    throw TypeError("is_positive_11: form has (2,0) or (0,2) components");
  return is_psd(hermitian_11(eta), tol);
}

/// Hermitian matrix of the quadratic form Q(c) = [sqrt(-1) nu ^ z_c ^ zbar_c]_Vol,
/// z_c = sum c_k z_k, recovered by polarization.
template <class S>
CMatrix<S> codim1_matrix(const KahlerData<S>& kd, const Form<S>& nu) {
  const int N = kd.N();
  const Complex<S> i = Complex<S>::i();
  auto Q = [&](const std::vector<Complex<S>>& c) {
    Form<S> zc(N), zbc(N);
    for (int k = 0; k < N; ++k) {
      zc.add_term(Mask(1) << k, c[k]);
      zbc.add_term(Mask(1) << (N + k), c[k].conj());
    }
    return kd.vol_coefficient(i * wedge(nu, wedge(zc, zbc)));
  };
  auto unit = [&](int k, int l, const Complex<S>& cl) {
    std::vector<Complex<S>> c(N);
    c[k] = Complex<S>(1);
    if (l >= 0) c[l] = cl;
    return c;
  };
  std::vector<Complex<S>> diag(N);
  for (int k = 0; k < N; ++k) diag[k] = Q(unit(k, -1, Complex<S>(0)));
  CMatrix<S> H(N, N);
  for (int k = 0; k < N; ++k) {
    H(k, k) = diag[k];
    for (int l = k + 1; l < N; ++l) {
      Complex<S> P1 = Q(unit(k, l, Complex<S>(1))) - diag[k] - diag[l];
      Complex<S> P2 = Q(unit(k, l, i)) - diag[k] - diag[l];
      Complex<S> half(ScalarTraits<S>::from_ratio(1, 2));
      H(k, l) = half * (P1 + i * P2);
      H(l, k) = half * (P1 - i * P2);
    }
  }
  return H;
}

/// Positivity of a real (N-1,N-1)_I form nu, via the Hermitian form
/// c -> [sqrt(-1) nu ^ z_c ^ zbar_c]_Vol.
template <class S>
bool is_positive_codim1(const KahlerData<S>& kd, const Form<S>& nu, double tol = kDefaultTolerance) {
  const int N = kd.N();
  kd.model().check(nu);
  require_degree(nu, 2 * N - 2, "is_positive_codim1");
  if (!is_real(nu, tol)) throw RealityError("is_positive_codim1: form is not real");
  const double scale = max_abs_coeff(nu);
  for (const auto& [m, c] : nu.terms())
    if (bidegree(m, N) != std::make_pair(N - 1, N - 1) && !near_zero(c, tol, scale))
      throw TypeError("is_positive_codim1: form is not of type (N-1,N-1)");
  return is_psd(codim1_matrix(kd, nu), tol);
}

/// rho of type (2,0)_K with I(rho) = conj(rho) is K-positive when Re(rho),
/// a real (1,1)_I form, is positive.
template <class S>
bool is_K_positive(const KahlerData<S>& kd, const Form<S>& rho, double tol = kDefaultTolerance) {
  const FiberModel<S>& model = kd.model();
  model.check(rho);
  require_degree(rho, 2, "is_K_positive");
  if (!is_of_type(model, rho, InducedStructure<S>::K(), 2, 0, tol))
    throw TypeError("is_K_positive: form is not of type (2,0)_K");
  if (!near(model.act_I(rho), conj(rho), tol)) throw RealityError("is_K_positive: I(rho) != conj(rho)");
  const Form<S> re = real_part(rho);
  const double scale = max_abs_coeff(re);
  if (!near_zero(re.bidegree_part(2, 0), tol, scale) || !near_zero(re.bidegree_part(0, 2), tol, scale))
    throw TypeError("is_K_positive: Re(rho) is not of type (1,1)_I");
  return is_psd(hermitian_11(re), tol);
}

/// Unit quaternion g = (1 + i + j + k) / 2; conjugation by g sends K -> I, I -> J.
template <class S>
UnitQuaternion<S> rotation_K_to_I() {
  const S h = ScalarTraits<S>::from_ratio(1, 2);
  return UnitQuaternion<S>(Quaternion<S>(h, h, h, h));
}

/// Algebraic conditions on a (2,0)_I form eta:
///   (a) J eta = conj(eta);
///   (b) eta(x, J xbar) >= 0 for every (1,0)_I vector x.
/// (b) is decided on the Hermitian matrix H_kl = eta(d/dz_k, J d/dzbar_l).
template <class S>
struct RotatedPositivity {
  bool reality = false;
  bool positive = false;
  CMatrix<S> H;
};

template <class S>
RotatedPositivity<S> rotated_positivity_conditions(const KahlerData<S>& kd, const Form<S>& eta, double tol = kDefaultTolerance) {
  const FiberModel<S>& model = kd.model();
  const int N = model.N();
  const int D = model.dim();
  model.check(eta);
  require_degree(eta, 2, "rotated_positivity_conditions");
  const double scale = max_abs_coeff(eta);
  if (!near_zero(eta.bidegree_part(1, 1), tol, scale) || !near_zero(eta.bidegree_part(0, 2), tol, scale))
    throw TypeError("rotated_positivity_conditions: form is not of type (2,0)_I");
  RotatedPositivity<S> r;
  r.reality = near(model.act_J(eta), conj(eta), tol);
  // Covectors transform by pullback, so (J d_a)_b = Jc(a, b).
  const CMatrix<S>& Jc = model.J();
  auto pair = [&](int a, int b) -> Complex<S> {  // eta(d_a, d_b)
    if (a == b) return Complex<S>(0);
    if (a < b) return eta.coeff((Mask(1) << a) | (Mask(1) << b));
    return -eta.coeff((Mask(1) << a) | (Mask(1) << b));
  };
  r.H = CMatrix<S>(N, N);
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l) {
      Complex<S> s;
      for (int b = 0; b < D; ++b) {
        const Complex<S>& vb = Jc(N + l, b);
        if (vb.is_zero()) continue;
        s += vb * pair(k, b);
      }
      r.H(k, l) = s;
    }
  r.positive = is_hermitian(r.H, tol) && is_psd(r.H, tol);
  return r;
}

}  // namespace hyperfiber
