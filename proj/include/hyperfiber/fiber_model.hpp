#pragma once

#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "hyperfiber/errors.hpp"
#include "hyperfiber/form.hpp"
#include "hyperfiber/matrix.hpp"
#include "hyperfiber/quaternion.hpp"

namespace hyperfiber {

/// The flat model fiber H^n with its complexified cotangent basis
/// z_1..z_N, zbar_1..zbar_N (N = 2n) and the quaternion action on covectors.
///
/// Covector dictionary, for each quaternionic block (z_{2a-1}, z_{2a}):
///   I z_k = i z_k,  J z_{2a-1} = -zbar_{2a},  J z_{2a} = zbar_{2a-1},  K = I J.
/// With `fault` set, the sign of J z_{2a} (and of its conjugate) is flipped;
/// this breaks J^2 = -1 and exists only to self-test the harness.
template <class S>
class FiberModel {
 public:
  explicit FiberModel(int n, bool fault = false) : n_(n), N_(2 * n), fault_(fault) {
    if (n < 1 || n > 3) throw ConfigError("quaternionic dimension n must be 1, 2 or 3");
    const int D = 2 * N_;
    I_ = CMatrix<S>(D, D);
    J_ = CMatrix<S>(D, D);
    for (int k = 0; k < N_; ++k) {
      I_(k, k) = Complex<S>::i();
      I_(N_ + k, N_ + k) = -Complex<S>::i();
    }
    const Complex<S> one(1);
    const Complex<S> flip = fault ? -one : one;
    for (int a = 0; a < n_; ++a) {
      int p = 2 * a, q = 2 * a + 1;
      J_(N_ + q, p) = -one;      // J z_p = -zbar_q
      J_(N_ + p, q) = flip;      // J z_q = zbar_p
      J_(q, N_ + p) = -one;      // J zbar_p = -z_q
      J_(p, N_ + q) = flip;      // J zbar_q = z_p
    }
    K_ = I_ * J_;
  }

  int n() const { return n_; }
  int N() const { return N_; }
  int dim() const { return 2 * N_; }
  bool fault() const { return fault_; }

  const CMatrix<S>& I() const { return I_; }
  const CMatrix<S>& J() const { return J_; }
  const CMatrix<S>& K() const { return K_; }

  /// Covector action of a quaternion: a + bI + cJ + dK.
  CMatrix<S> rho(const Quaternion<S>& q) const {
    CMatrix<S> m = CMatrix<S>::identity(dim()) * Complex<S>(q.w);
    m += I_ * Complex<S>(q.x);
    m += J_ * Complex<S>(q.y);
    m += K_ * Complex<S>(q.z);
    return m;
  }
  CMatrix<S> structure(const InducedStructure<S>& L) const { return rho(L.quat()); }

  template <class C>
  BasicForm<S, C> act(const InducedStructure<S>& L, const BasicForm<S, C>& f) const {
    check(f);
    return apply_covector_map(structure(L), f);
  }
  template <class C>
  BasicForm<S, C> act(const UnitQuaternion<S>& g, const BasicForm<S, C>& f) const {
    check(f);
    return apply_covector_map(rho(g.quat()), f);
  }
  template <class C>
  BasicForm<S, C> act_I(const BasicForm<S, C>& f) const {
    check(f);
    return apply_covector_map(I_, f);
  }
  template <class C>
  BasicForm<S, C> act_J(const BasicForm<S, C>& f) const {
    check(f);
    return apply_covector_map(J_, f);
  }
  template <class C>
  BasicForm<S, C> act_K(const BasicForm<S, C>& f) const {
    check(f);
    return apply_covector_map(K_, f);
  }

  template <class C>
  void check(const BasicForm<S, C>& f) const {
    if (f.N() != N_) throw ModelMismatch("form does not live on this fiber model");
  }

 private:
  int n_, N_;
  bool fault_;
  CMatrix<S> I_, J_, K_;
};

/// Covector basis adapted to an induced structure L: u_k spans the +i
/// eigenline of L in the block containing z_k and takes index k; v spans
/// the -i eigenline and takes the index N+m of the zbar_m in that block.
template <class S>
struct AdaptedFrame {
  CMatrix<S> to_frame;    // old covector -> coordinates in the adapted frame
  CMatrix<S> from_frame;  // adapted covector -> old coordinates
  bool identity = false;
};

namespace detail {

inline int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace detail

template <class S>
AdaptedFrame<S> adapted_frame(const FiberModel<S>& model, const InducedStructure<S>& L) {
  const int N = model.N();
  const int D = model.dim();
  AdaptedFrame<S> fr;
  if (L == InducedStructure<S>::I()) {
    fr.to_frame = fr.from_frame = CMatrix<S>::identity(D);
    fr.identity = true;
    return fr;
  }
  const CMatrix<S> M = model.structure(L);

  std::vector<int> parent(D);
  std::iota(parent.begin(), parent.end(), 0);
  for (const CMatrix<S>* G : {&model.I(), &model.J(), &M})
    for (int r = 0; r < D; ++r)
      for (int c = 0; c < D; ++c)
        if (!(*G)(r, c).is_zero()) parent[detail::find_root(parent, r)] = detail::find_root(parent, c);
  std::map<int, std::vector<int>> blocks;
  for (int x = 0; x < D; ++x) blocks[detail::find_root(parent, x)].push_back(x);

  fr.from_frame = CMatrix<S>(D, D);
  fr.to_frame = CMatrix<S>(D, D);
  const Complex<S> i = Complex<S>::i();
  for (const auto& [root, idx] : blocks) {
    if (idx.size() != 2 || idx[0] >= N || idx[1] < N)
      throw ConventionError("covector action does not split into {z, zbar} blocks");
    const int p = idx[0], q = idx[1];
    const Complex<S> m00 = M(p, p), m01 = M(p, q), m10 = M(q, p), m11 = M(q, q);
    // L^2 = -1 on the block.
    if (!near(m00 * m00 + m01 * m10, Complex<S>(-1), 1e-9) || !near_zero(m00 * m01 + m01 * m11, 1e-9) ||
        !near_zero(m10 * m00 + m11 * m10, 1e-9) || !near(m10 * m01 + m11 * m11, Complex<S>(-1), 1e-9))
      throw ConventionError("L^2 != -1 on covectors (" + mask_name(Mask(1) << p, N) + ", " +
                            mask_name(Mask(1) << q, N) + ")");
    auto eigvec = [&](const Complex<S>& lam) {
      std::pair<Complex<S>, Complex<S>> v{m01, lam - m00};
      if (v.first.is_zero() && v.second.is_zero()) v = {lam - m11, m10};
      return v;
    };
    auto normalize = [](std::pair<Complex<S>, Complex<S>> v, bool prefer_first) {
      const Complex<S>& piv = (prefer_first ? !v.first.is_zero() : v.second.is_zero()) ? v.first : v.second;
      Complex<S> s = Complex<S>(1) / piv;
      return std::make_pair(v.first * s, v.second * s);
    };
    auto u = normalize(eigvec(i), true);
    auto v = normalize(eigvec(-i), false);
    // columns: new covector in old coordinates
    const int ui = p, vi = q;
    fr.from_frame(p, ui) = u.first;
    fr.from_frame(q, ui) = u.second;
    fr.from_frame(p, vi) = v.first;
    fr.from_frame(q, vi) = v.second;
    // invert the 2x2 block
    Complex<S> d = u.first * v.second - v.first * u.second;
    if (d.is_zero()) throw ConventionError("degenerate eigenbasis for induced structure");
    fr.to_frame(ui, p) = v.second / d;
    fr.to_frame(ui, q) = -v.first / d;
    fr.to_frame(vi, p) = -u.second / d;
    fr.to_frame(vi, q) = u.first / d;
  }
  return fr;
}

/// Components of f by (p, q)-type with respect to L. Only nonzero components
/// are emitted; they sum to f.
template <class S, class C>
std::map<std::pair<int, int>, BasicForm<S, C>> hodge_type_decompose(const FiberModel<S>& model,
                                                                    const BasicForm<S, C>& f,
                                                                    const InducedStructure<S>& L) {
  model.check(f);
  std::map<std::pair<int, int>, BasicForm<S, C>> out;
  if (f.is_zero()) return out;
  auto d = f.homogeneous_degree();
  if (!d) throw DegreeError("hodge_type_decompose: form is not homogeneous");
  const int N = model.N();
  const AdaptedFrame<S> fr = adapted_frame(model, L);
  const BasicForm<S, C> g = fr.identity ? f : apply_covector_map(fr.to_frame, f);
  const double scale = max_abs_coeff(f);
  for (int p = 0; p <= *d; ++p) {
    BasicForm<S, C> part = g.bidegree_part(p, *d - p);
    if (part.is_zero()) continue;
    BasicForm<S, C> back = fr.identity ? part : apply_covector_map(fr.from_frame, part);
    back = pruned(back, 1e-13, scale);
    if (!back.is_zero()) out.emplace(std::make_pair(p, *d - p), std::move(back));
  }
  (void)N;
  return out;
}

template <class S, class C>
BasicForm<S, C> type_component(const FiberModel<S>& model, const BasicForm<S, C>& f, const InducedStructure<S>& L,
                               int p, int q) {
  auto parts = hodge_type_decompose(model, f, L);
  auto it = parts.find({p, q});
  return it == parts.end() ? BasicForm<S, C>(model.N()) : it->second;
}

/// True if every component of f other than (p, q)_L vanishes (within tol).
template <class S, class C>
bool is_of_type(const FiberModel<S>& model, const BasicForm<S, C>& f, const InducedStructure<S>& L, int p, int q,
                double tol = kDefaultTolerance) {
  const double scale = max_abs_coeff(f);
  for (const auto& [pq, part] : hodge_type_decompose(model, f, L))
    if (pq != std::make_pair(p, q) && !near_zero(part, tol, scale)) return false;
  return true;
}

/// The real model H^n, used as an independent oracle for the covector
/// dictionary and for Kaehler forms. Real coordinates (e0, e1, e2, e3) per
/// block, vector quaternion v = e0 + e1 i + e2 j + e3 k, metric 2 * Euclidean.
template <class S>
class RealModel {
 public:
  explicit RealModel(int n) : n_(n), N_(2 * n) {
    const int R = 4 * n;
    const int D = 2 * N_;
    covectors_ = CMatrix<S>(D, R);
    duals_ = CMatrix<S>(R, D);
    const Complex<S> one(1), i = Complex<S>::i();
    const Complex<S> half(ScalarTraits<S>::from_ratio(1, 2));
    for (int a = 0; a < n; ++a) {
      int p = 2 * a, q = 2 * a + 1, e = 4 * a;
      // z_p = e0 - i e1, z_q = -e2 + i e3
      covectors_(p, e) = one;
      covectors_(p, e + 1) = -i;
      covectors_(q, e + 2) = -one;
      covectors_(q, e + 3) = i;
      covectors_(N_ + p, e) = one;
      covectors_(N_ + p, e + 1) = i;
      covectors_(N_ + q, e + 2) = -one;
      covectors_(N_ + q, e + 3) = -i;
      duals_(e, p) = half;
      duals_(e + 1, p) = half * i;
      duals_(e + 2, q) = -half;
      duals_(e + 3, q) = -half * i;
      duals_(e, N_ + p) = half;
      duals_(e + 1, N_ + p) = -half * i;
      duals_(e + 2, N_ + q) = -half;
      duals_(e + 3, N_ + q) = half * i;
    }
  }

  int N() const { return N_; }
  const CMatrix<S>& covectors() const { return covectors_; }
  const CMatrix<S>& duals() const { return duals_; }

  /// Real matrix of v -> q v on H^n.
  CMatrix<S> left_mult(const Quaternion<S>& q) const {
    const int R = 4 * n_;
    CMatrix<S> m(R, R);
    const S w = q.w, x = q.x, y = q.y, z = q.z;
    const S rows[4][4] = {{w, S(-x), S(-y), S(-z)}, {x, w, S(-z), y}, {y, z, w, S(-x)}, {z, S(-y), x, w}};
    for (int a = 0; a < n_; ++a)
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m(4 * a + r, 4 * a + c) = Complex<S>(rows[r][c]);
    return m;
  }

  /// Covector action alpha -> alpha o L_{g^{-1}}, written in the z/zbar basis.
  CMatrix<S> pullback(const UnitQuaternion<S>& g) const {
    CMatrix<S> P = covectors_ * left_mult(g.quat().conj()) * duals_;  // P(b, m) = z_b(L dual_m)
    return P.transpose();
  }

  /// 2-form with coefficient W(dual_a, dual_b) on zeta_a ^ zeta_b, a < b.
  Form<S> two_form(const CMatrix<S>& W) const {
    CMatrix<S> c = duals_.transpose() * W * duals_;
    Form<S> f(N_);
    for (int a = 0; a < 2 * N_; ++a)
      for (int b = a + 1; b < 2 * N_; ++b) f.add_term((Mask(1) << a) | (Mask(1) << b), c(a, b));
    return f;
  }

  /// omega_L(v, w) = <v, L w>.
  Form<S> kahler_form(const InducedStructure<S>& L) const {
    return two_form(left_mult(L.quat()) * Complex<S>(2));
  }

 private:
  int n_, N_;
  CMatrix<S> covectors_, duals_;
};

}  // namespace hyperfiber
