#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hyperfiber/scalar.hpp"

namespace hyperfiber {

/// Small dense complex matrix, row-major. Used for curvature blocks,
/// covector actions and Hermitian coefficient matrices.
template <class S>
class CMatrix {
 public:
  using C = Complex<S>;

  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static CMatrix zeros(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }
  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = C(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  C& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const C& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  bool is_zero() const {
    for (const auto& x : a_)
      if (!x.is_zero()) return false;
    return true;
  }

  CMatrix adjoint() const {
    CMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j).conj();
    return m;
  }
  CMatrix transpose() const {
    CMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }
  CMatrix conj() const {
    CMatrix m(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k].conj();
    return m;
  }

  C trace() const {
    C t;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  /// Sum of |a_ij|^2, i.e. Tr(M M^dagger).
  S frobenius2() const {
    S s(0);
    for (const auto& x : a_) s += x.norm2();
    return s;
  }

  /// Sub-block [r0, r0+nr) x [c0, c0+nc).
  CMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    CMatrix m(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
  }

  CMatrix operator-() const {
    CMatrix m(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = -a_[k];
    return m;
  }
  CMatrix& operator+=(const CMatrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  CMatrix& operator-=(const CMatrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  CMatrix& operator*=(const C& s) {
    for (auto& x : a_) x *= s;
    return *this;
  }
  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(const C& s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(CMatrix a, const C& s) { return a *= s; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("CMatrix: shape mismatch in product");
    CMatrix m(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const C& x = a(i, k);
        if (x.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) += x * b(k, j);
      }
    return m;
  }
  friend bool operator==(const CMatrix& a, const CMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }
  friend bool operator!=(const CMatrix& a, const CMatrix& b) { return !(a == b); }

 private:
  void check_same(const CMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("CMatrix: shape mismatch");
  }

  std::size_t rows_ = 0, cols_ = 0;
  std::vector<C> a_;
};

/// Tr(AB) without forming the product.
template <class S>
Complex<S> trace_of_product(const CMatrix<S>& a, const CMatrix<S>& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) throw std::invalid_argument("trace_of_product: shape mismatch");
  Complex<S> t;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) t += a(i, k) * b(k, i);
  return t;
}

template <class S>
double max_abs(const CMatrix<S>& m) {
  double r = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r = std::max(r, magnitude(m(i, j)));
  return r;
}

template <class S>
bool near(const CMatrix<S>& a, const CMatrix<S>& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if constexpr (is_exact_v<S>) {
    return a == b;
  } else {
    double scale = std::max({1.0, max_abs(a), max_abs(b)});
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j)
        if (magnitude(a(i, j) - b(i, j)) > tol * scale) return false;
    return true;
  }
}

template <class S>
bool near_zero(const CMatrix<S>& a, double tol, double scale = 1.0) {
  if constexpr (is_exact_v<S>) {
    return a.is_zero();
  } else {
    return max_abs(a) <= tol * std::max(1.0, scale);
  }
}

namespace detail {

// Index of the pivot in column c among rows >= r; -1 if the column is zero.
template <class S>
long pick_pivot(const CMatrix<S>& m, std::size_t r, std::size_t c) {
  long best = -1;
  double best_mag = 0;
  for (std::size_t i = r; i < m.rows(); ++i) {
    if (m(i, c).is_zero()) continue;
    if constexpr (is_exact_v<S>) return static_cast<long>(i);
    double mag = magnitude(m(i, c));
    if (best < 0 || mag > best_mag) {
      best = static_cast<long>(i);
      best_mag = mag;
    }
  }
  return best;
}

template <class S>
void swap_rows(CMatrix<S>& m, std::size_t a, std::size_t b) {
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

}  // namespace detail

template <class S>
Complex<S> det(CMatrix<S> m) {
  if (!m.square()) throw std::invalid_argument("det: matrix not square");
  const std::size_t n = m.rows();
  Complex<S> d(1);
  for (std::size_t c = 0; c < n; ++c) {
    long p = detail::pick_pivot(m, c, c);
    if (p < 0) return Complex<S>(0);
    if (static_cast<std::size_t>(p) != c) {
      detail::swap_rows(m, c, static_cast<std::size_t>(p));
      d = -d;
    }
    const Complex<S> piv = m(c, c);
    d *= piv;
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      Complex<S> f = m(i, c) / piv;
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return d;
}

template <class S>
CMatrix<S> inverse(const CMatrix<S>& a) {
  if (!a.square()) throw std::invalid_argument("inverse: matrix not square");
  const std::size_t n = a.rows();
  CMatrix<S> m = a;
  CMatrix<S> inv = CMatrix<S>::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    long p = detail::pick_pivot(m, c, c);
    if (p < 0) throw std::domain_error("inverse: singular matrix");
    detail::swap_rows(m, c, static_cast<std::size_t>(p));
    detail::swap_rows(inv, c, static_cast<std::size_t>(p));
    const Complex<S> piv = m(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      m(c, j) /= piv;
      inv(c, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m(i, c).is_zero()) continue;
      Complex<S> f = m(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) -= f * m(c, j);
        inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

template <class S>
bool is_hermitian(const CMatrix<S>& m, double tol = kDefaultTolerance) {
  return m.square() && near(m, m.adjoint(), tol);
}

/// Smallest eigenvalue of a Hermitian matrix (float backend only).
inline double min_eigenvalue(const CMatrix<Float>& m) {
  const auto n = static_cast<Eigen::Index>(m.rows());
  if (n == 0) return 0.0;
  Eigen::MatrixXcd e(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& z = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      e(i, j) = std::complex<double>(z.re, z.im);
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(e, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Positive semidefiniteness of a Hermitian matrix. Exact: every principal
/// minor is >= 0. Float: smallest eigenvalue >= -tol * |M|_F.
template <class S>
bool is_psd(const CMatrix<S>& m, double tol = kDefaultTolerance) {
  if (!is_hermitian(m, tol)) throw std::invalid_argument("is_psd: matrix is not Hermitian");
  const std::size_t n = m.rows();
  if constexpr (is_exact_v<S>) {
    for (unsigned subset = 1; subset < (1u << n); ++subset) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < n; ++i)
        if (subset >> i & 1u) idx.push_back(i);
      CMatrix<S> sub(idx.size(), idx.size());
      for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) sub(i, j) = m(idx[i], idx[j]);
      if (sgn(det(sub).re) < 0) return false;
    }
    return true;
  } else {
    double scale = std::sqrt(m.frobenius2());
    return min_eigenvalue(m) >= -tol * scale;
  }
}

}  // namespace hyperfiber
