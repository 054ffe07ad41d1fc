#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace hyperfiber {

// Scalar backends. Every module is a template over one of these.
using Exact = mpq_class;
using Float = double;

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Exact> {
  static constexpr bool exact = true;
  static constexpr const char* name = "exact";

  static Exact from_int(long v) { return Exact(v); }
  static Exact from_ratio(long num, long den) {
    Exact q(num, den);
    q.canonicalize();
    return q;
  }
  static double to_double(const Exact& v) { return v.get_d(); }
  static std::string to_string(const Exact& v) { return v.get_str(); }
  static Exact from_string(const std::string& s) {
    Exact q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    q.canonicalize();
    return q;
  }
  static Exact abs(const Exact& v) { return ::abs(v); }
  static int sign(const Exact& v) { return sgn(v); }
  static bool near(const Exact& a, const Exact& b, double /*tol*/) { return a == b; }
  static bool near_zero(const Exact& a, double /*tol*/, double /*scale*/) { return sgn(a) == 0; }
};

template <>
struct ScalarTraits<Float> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";

  static double from_int(long v) { return static_cast<double>(v); }
  static double from_ratio(long num, long den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double to_double(double v) { return v; }
  static std::string to_string(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  }
  static double from_string(const std::string& s) { return std::stod(s); }
  static double abs(double v) { return std::fabs(v); }
  static int sign(double v) { return (v > 0) - (v < 0); }
  static bool near(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
  }
  static bool near_zero(double a, double tol, double scale) {
    return std::fabs(a) <= tol * std::max(1.0, scale);
  }
};

template <class S>
inline constexpr bool is_exact_v = ScalarTraits<S>::exact;

/// Default relative tolerance for the float backend.
inline constexpr double kDefaultTolerance = 1e-9;

/// Gaussian numbers over a scalar backend. std::complex is unspecified for
/// non-floating types, so the exact backend needs its own.
template <class S>
struct Complex {
  S re{0};
  S im{0};

  Complex() = default;
  Complex(S r) : re(std::move(r)), im(0) {}  // NOLINT: implicit by design of the algebra
  Complex(S r, S i) : re(std::move(r)), im(std::move(i)) {}
  Complex(int r) : re(r), im(0) {}  // NOLINT

  static Complex i() { return Complex(S(0), S(1)); }

  Complex conj() const { return Complex(re, S(-im)); }
  S norm2() const { return S(re * re + im * im); }
  bool is_zero() const { return ScalarTraits<S>::sign(re) == 0 && ScalarTraits<S>::sign(im) == 0; }
  bool is_real() const { return ScalarTraits<S>::sign(im) == 0; }

  Complex operator-() const { return Complex(S(-re), S(-im)); }
  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    S r = re * o.re - im * o.im;
    S m = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(m);
    return *this;
  }
  Complex& operator/=(const Complex& o) {
    S d = o.norm2();
    if (ScalarTraits<S>::sign(d) == 0) throw std::domain_error("complex division by zero");
    S r = (re * o.re + im * o.im) / d;
    S m = (im * o.re - re * o.im) / d;
    re = std::move(r);
    im = std::move(m);
    return *this;
  }
  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }
};

template <class S>
double magnitude(const Complex<S>& z) {
  return std::hypot(ScalarTraits<S>::to_double(z.re), ScalarTraits<S>::to_double(z.im));
}

template <class S>
bool near(const Complex<S>& a, const Complex<S>& b, double tol) {
  return ScalarTraits<S>::near(a.re, b.re, tol) && ScalarTraits<S>::near(a.im, b.im, tol);
}

template <class S>
bool near_zero(const Complex<S>& a, double tol, double scale = 1.0) {
  return ScalarTraits<S>::near_zero(a.re, tol, scale) && ScalarTraits<S>::near_zero(a.im, tol, scale);
}

template <class S>
std::string to_string(const Complex<S>& z) {
  std::string im = ScalarTraits<S>::to_string(z.im);
  return ScalarTraits<S>::to_string(z.re) + (im.front() == '-' ? "" : "+") + im + "i";
}

inline long factorial(int k) {
  long f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace hyperfiber
