#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyperfiber/errors.hpp"
#include "hyperfiber/matrix.hpp"
#include "hyperfiber/rng.hpp"
#include "hyperfiber/scalar.hpp"

namespace hyperfiber {

/// Covector multi-index as a bitmask over 2N slots: bit k is z_k, bit N+k is
/// zbar_k (k = 0..N-1). Canonical order is increasing bit position.
using Mask = std::uint32_t;

inline int popcount(Mask m) { return std::popcount(m); }

/// Sign of (e_a)(e_b) -> e_{a|b} after sorting; 0 if the index sets meet.
inline int wedge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  int swaps = 0;
  for (Mask rest = b; rest; rest &= rest - 1) {
    int bit = std::countr_zero(rest);
    swaps += popcount(a >> (bit + 1));
  }
  return (swaps & 1) ? -1 : 1;
}

inline Mask low_half(Mask m, int N) { return m & ((Mask(1) << N) - 1); }
inline Mask high_half(Mask m, int N) { return m >> N; }
inline Mask full_mask(int N) { return (Mask(1) << (2 * N)) - 1; }

/// (p, q) bidegree of a monomial with respect to the canonical z / zbar split.
inline std::pair<int, int> bidegree(Mask m, int N) {
  return {popcount(low_half(m, N)), popcount(high_half(m, N))};
}

/// Mask of the conjugate monomial and the sign picked up when re-sorting it.
inline std::pair<Mask, int> conj_mask(Mask m, int N) {
  Mask lo = low_half(m, N), hi = high_half(m, N);
  int sign = ((popcount(lo) * popcount(hi)) & 1) ? -1 : 1;
  return {hi | (lo << N), sign};
}

/// Human readable monomial, e.g. "z1^zb2" (1-based like the usual notation).
inline std::string mask_name(Mask m, int N) {
  if (m == 0) return "1";
  std::string s;
  for (int b = 0; b < 2 * N; ++b) {
    if (!(m >> b & 1u)) continue;
    if (!s.empty()) s += "^";
    s += b < N ? "z" + std::to_string(b + 1) : "zb" + std::to_string(b - N + 1);
  }
  return s;
}

/// Sparse element of the complexified exterior algebra of the fiber, with
/// coefficients in C (complex scalars, or complex matrices for bundle-valued
/// forms). Zero coefficients are never stored.
template <class S, class C>
class BasicForm {
 public:
  using Scalar = S;
  using Coeff = C;
  using Terms = std::map<Mask, C>;

  BasicForm() = default;
  explicit BasicForm(int N) : N_(N) {
    if (N < 1 || N > 8) throw std::invalid_argument("BasicForm: unsupported dimension");
  }

  static BasicForm monomial(int N, Mask m, C c) {
    BasicForm f(N);
    f.add_term(m, std::move(c));
    return f;
  }

  int N() const { return N_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  C coeff(Mask m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? C{} : it->second;
  }
  const C* find(Mask m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? nullptr : &it->second;
  }

  void add_term(Mask m, const C& c) {
    if (m >> (2 * N_)) throw std::invalid_argument("BasicForm: index out of range");
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.try_emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  /// True if every term has degree d (the zero form has every degree).
  bool has_degree(int d) const {
    for (const auto& [m, c] : terms_)
      if (popcount(m) != d) return false;
    return true;
  }
  std::optional<int> homogeneous_degree() const {
    if (terms_.empty()) return std::nullopt;
    int d = popcount(terms_.begin()->first);
    return has_degree(d) ? std::optional<int>(d) : std::nullopt;
  }

  /// Terms of bidegree (p, q) with respect to the canonical split.
  BasicForm bidegree_part(int p, int q) const {
    BasicForm f(N_);
    for (const auto& [m, c] : terms_)
      if (bidegree(m, N_) == std::make_pair(p, q)) f.terms_.emplace(m, c);
    return f;
  }

  template <class F>
  BasicForm map_coeffs(F&& fn) const {
    BasicForm f(N_);
    for (const auto& [m, c] : terms_) f.add_term(m, fn(c));
    return f;
  }

  BasicForm operator-() const {
    BasicForm f(N_);
    for (const auto& [m, c] : terms_) f.terms_.emplace(m, -c);
    return f;
  }
  BasicForm& operator+=(const BasicForm& o) {
    check_model(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  BasicForm& operator-=(const BasicForm& o) {
    check_model(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  BasicForm& operator*=(const Complex<S>& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c = s * c;
    return *this;
  }
  friend BasicForm operator+(BasicForm a, const BasicForm& b) { return a += b; }
  friend BasicForm operator-(BasicForm a, const BasicForm& b) { return a -= b; }
  friend BasicForm operator*(const Complex<S>& s, BasicForm a) { return a *= s; }
  friend bool operator==(const BasicForm& a, const BasicForm& b) { return a.N_ == b.N_ && a.terms_ == b.terms_; }
  friend bool operator!=(const BasicForm& a, const BasicForm& b) { return !(a == b); }

  void check_model(const BasicForm& o) const {
    if (N_ != o.N_) throw ModelMismatch("forms live on fibers of different dimension");
  }

 private:
  int N_ = 0;
  Terms terms_;
};

template <class S>
using Form = BasicForm<S, Complex<S>>;

template <class S>
using BundleForm = BasicForm<S, CMatrix<S>>;

/// Scalar 1-forms z_k and zbar_k (0-based k).
template <class S>
Form<S> z(int N, int k) {
  return Form<S>::monomial(N, Mask(1) << k, Complex<S>(1));
}
template <class S>
Form<S> zbar(int N, int k) {
  return Form<S>::monomial(N, Mask(1) << (N + k), Complex<S>(1));
}
template <class S>
Form<S> constant_form(int N, const Complex<S>& c) {
  return Form<S>::monomial(N, 0, c);
}

/// Exterior product; coefficient multiplication is the algebra product of C.
template <class S, class C>
BasicForm<S, C> wedge(const BasicForm<S, C>& f, const BasicForm<S, C>& g) {
  f.check_model(g);
  BasicForm<S, C> out(f.N());
  for (const auto& [m1, c1] : f.terms())
    for (const auto& [m2, c2] : g.terms()) {
      int s = wedge_sign(m1, m2);
      if (s == 0) continue;
      C prod = c1 * c2;
      if (s < 0) prod = -prod;
      out.add_term(m1 | m2, prod);
    }
  return out;
}

/// Scalar form times bundle-valued form.
template <class S>
BundleForm<S> wedge(const Form<S>& f, const BundleForm<S>& g) {
  if (f.N() != g.N()) throw ModelMismatch("forms live on fibers of different dimension");
  BundleForm<S> out(g.N());
  for (const auto& [m1, c1] : f.terms())
    for (const auto& [m2, c2] : g.terms()) {
      int s = wedge_sign(m1, m2);
      if (s == 0) continue;
      out.add_term(m1 | m2, (s < 0 ? -c1 : c1) * c2);
    }
  return out;
}

template <class S>
Form<S> power(const Form<S>& f, int p) {
  Form<S> r = constant_form<S>(f.N(), Complex<S>(1));
  for (int i = 0; i < p; ++i) r = wedge(r, f);
  return r;
}

/// Complex conjugation: z_k <-> zbar_k on indices, conjugate coefficients.
template <class S, class C>
BasicForm<S, C> conj(const BasicForm<S, C>& f) {
  BasicForm<S, C> out(f.N());
  for (const auto& [m, c] : f.terms()) {
    auto [cm, sign] = conj_mask(m, f.N());
    C cc = c.conj();
    out.add_term(cm, sign < 0 ? -cc : cc);
  }
  return out;
}

template <class S, class C>
double max_abs_coeff(const BasicForm<S, C>& f) {
  double r = 0;
  for (const auto& [m, c] : f.terms()) {
    if constexpr (std::is_same_v<C, Complex<S>>)
      r = std::max(r, magnitude(c));
    else
      r = std::max(r, max_abs(c));
  }
  return r;
}

/// Coefficientwise comparison; exact equality in the exact backend, relative
/// tolerance against the larger coefficient scale in float.
template <class S, class C>
bool near(const BasicForm<S, C>& f, const BasicForm<S, C>& g, double tol = kDefaultTolerance) {
  if (f.N() != g.N()) return false;
  if constexpr (is_exact_v<S>) {
    return f == g;
  } else {
    double scale = std::max({1.0, max_abs_coeff(f), max_abs_coeff(g)});
    return max_abs_coeff(f - g) <= tol * scale;
  }
}

template <class S, class C>
bool near_zero(const BasicForm<S, C>& f, double tol = kDefaultTolerance, double scale = 1.0) {
  if constexpr (is_exact_v<S>) {
    return f.is_zero();
  } else {
    return max_abs_coeff(f) <= tol * std::max(1.0, scale);
  }
}

/// Float forms accumulate rounding noise; drop coefficients below tol * scale.
template <class S, class C>
BasicForm<S, C> pruned(const BasicForm<S, C>& f, double tol, double scale) {
  if constexpr (is_exact_v<S>) {
    return f;
  } else {
    BasicForm<S, C> out(f.N());
    for (const auto& [m, c] : f.terms()) {
      double a;
      if constexpr (std::is_same_v<C, Complex<S>>)
        a = magnitude(c);
      else
        a = max_abs(c);
      if (a > tol * std::max(1.0, scale)) out.add_term(m, c);
    }
    return out;
  }
}

template <class S>
bool is_real(const Form<S>& f, double tol = kDefaultTolerance) {
  return near(conj(f), f, tol);
}

/// Real part (f + conj f) / 2.
template <class S>
Form<S> real_part(const Form<S>& f) {
  return Complex<S>(ScalarTraits<S>::from_ratio(1, 2)) * (f + conj(f));
}

/// Multiplicative extension of a linear map on covectors. Column b of M holds
/// the image of basis covector b in the basis of the target frame.
template <class S, class C>
BasicForm<S, C> apply_covector_map(const CMatrix<S>& M, const BasicForm<S, C>& f) {
  const int N = f.N();
  const int D = 2 * N;
  if (M.rows() != static_cast<std::size_t>(D) || M.cols() != static_cast<std::size_t>(D))
    throw ModelMismatch("covector map has the wrong size");
  std::vector<std::vector<std::pair<int, Complex<S>>>> image(D);
  for (int b = 0; b < D; ++b)
    for (int r = 0; r < D; ++r)
      if (!M(r, b).is_zero()) image[b].emplace_back(r, M(r, b));

  BasicForm<S, C> out(N);
  std::map<Mask, std::map<Mask, Complex<S>>> cache;
  for (const auto& [m, c] : f.terms()) {
    std::map<Mask, Complex<S>> cur{{Mask(0), Complex<S>(1)}};
    for (Mask rest = m; rest; rest &= rest - 1) {
      int b = std::countr_zero(rest);
      std::map<Mask, Complex<S>> next;
      for (const auto& [pm, pc] : cur)
        for (const auto& [r, x] : image[b]) {
          int s = wedge_sign(pm, Mask(1) << r);
          if (s == 0) continue;
          Complex<S> v = pc * x;
          if (s < 0) v = -v;
          auto [it, fresh] = next.try_emplace(pm | (Mask(1) << r), v);
          if (!fresh) it->second += v;
        }
      cur = std::move(next);
    }
    for (const auto& [pm, pc] : cur)
      if (!pc.is_zero()) out.add_term(pm, pc * c);
  }
  return out;
}

/// Random form of the given degree: each monomial present with probability
/// `density`, coefficients small Gaussian rationals.
template <class S>
Form<S> random_form(int N, int degree, Rng& rng, double density = 1.0) {
  Form<S> f(N);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Mask m = 0; m <= full_mask(N); ++m) {
    if (popcount(m) != degree) continue;
    if (density < 1.0 && u(rng) >= density) continue;
    f.add_term(m, random_complex<S>(rng));
  }
  return f;
}

template <class S, class C>
std::string to_string(const BasicForm<S, C>& f) {
  if (f.is_zero()) return "0";
  std::string s;
  for (const auto& [m, c] : f.terms()) {
    if (!s.empty()) s += " + ";
    if constexpr (std::is_same_v<C, Complex<S>>)
      s += "(" + to_string(c) + ")";
    else
      s += "[" + std::to_string(c.rows()) + "x" + std::to_string(c.cols()) + "]";
    s += mask_name(m, f.N());
  }
  return s;
}

}  // namespace hyperfiber
