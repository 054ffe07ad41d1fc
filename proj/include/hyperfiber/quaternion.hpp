#pragma once

#include <array>
#include <random>
#include <string>

#include "hyperfiber/errors.hpp"
#include "hyperfiber/rng.hpp"
#include "hyperfiber/scalar.hpp"

namespace hyperfiber {

/// w + x i + y j + z k.
template <class S>
struct Quaternion {
  S w{0}, x{0}, y{0}, z{0};

  Quaternion() = default;
  Quaternion(S w_, S x_, S y_, S z_) : w(std::move(w_)), x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {}

  static Quaternion one() { return {S(1), S(0), S(0), S(0)}; }
  static Quaternion i() { return {S(0), S(1), S(0), S(0)}; }
  static Quaternion j() { return {S(0), S(0), S(1), S(0)}; }
  static Quaternion k() { return {S(0), S(0), S(0), S(1)}; }

  Quaternion conj() const { return {w, S(-x), S(-y), S(-z)}; }
  S norm2() const { return S(w * w + x * x + y * y + z * z); }

  Quaternion operator-() const { return {S(-w), S(-x), S(-y), S(-z)}; }
  friend Quaternion operator+(const Quaternion& p, const Quaternion& q) {
    return {S(p.w + q.w), S(p.x + q.x), S(p.y + q.y), S(p.z + q.z)};
  }
  friend Quaternion operator-(const Quaternion& p, const Quaternion& q) {
    return {S(p.w - q.w), S(p.x - q.x), S(p.y - q.y), S(p.z - q.z)};
  }
  friend Quaternion operator*(const S& s, const Quaternion& q) {
    return {S(s * q.w), S(s * q.x), S(s * q.y), S(s * q.z)};
  }
  friend bool operator==(const Quaternion& p, const Quaternion& q) {
    return p.w == q.w && p.x == q.x && p.y == q.y && p.z == q.z;
  }
};

/// Hamilton product.
template <class S>
Quaternion<S> quat_mul(const Quaternion<S>& p, const Quaternion<S>& q) {
  return {S(p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z),
          S(p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y),
          S(p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x),
          S(p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w)};
}

template <class S>
Quaternion<S> operator*(const Quaternion<S>& p, const Quaternion<S>& q) {
  return quat_mul(p, q);
}

template <class S>
bool near(const Quaternion<S>& p, const Quaternion<S>& q, double tol) {
  using T = ScalarTraits<S>;
  return T::near(p.w, q.w, tol) && T::near(p.x, q.x, tol) && T::near(p.y, q.y, tol) && T::near(p.z, q.z, tol);
}

/// Element of SU(2): a quaternion of norm one.
template <class S>
class UnitQuaternion {
 public:
  explicit UnitQuaternion(Quaternion<S> q, double tol = kDefaultTolerance) : q_(std::move(q)) {
    if (!ScalarTraits<S>::near(q_.norm2(), S(1), tol))
      throw std::invalid_argument("UnitQuaternion: |q|^2 != 1");
  }
  static UnitQuaternion identity() { return UnitQuaternion(Quaternion<S>::one()); }

  const Quaternion<S>& quat() const { return q_; }
  UnitQuaternion inverse() const { return UnitQuaternion(q_.conj()); }
  friend UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b) {
    return UnitQuaternion(a.q_ * b.q_, 1e-6);
  }

 private:
  Quaternion<S> q_;
};

/// Induced complex structure L = aI + bJ + cK with a^2 + b^2 + c^2 = 1.
template <class S>
class InducedStructure {
 public:
  InducedStructure(S a, S b, S c, double tol = kDefaultTolerance) : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
    if (!ScalarTraits<S>::near(S(a_ * a_ + b_ * b_ + c_ * c_), S(1), tol))
      throw std::invalid_argument("InducedStructure: a^2+b^2+c^2 != 1");
  }
  static InducedStructure I() { return {S(1), S(0), S(0)}; }
  static InducedStructure J() { return {S(0), S(1), S(0)}; }
  static InducedStructure K() { return {S(0), S(0), S(1)}; }

  const S& a() const { return a_; }
  const S& b() const { return b_; }
  const S& c() const { return c_; }
  Quaternion<S> quat() const { return {S(0), a_, b_, c_}; }
  UnitQuaternion<S> as_unit() const { return UnitQuaternion<S>(quat()); }
  InducedStructure operator-() const { return {S(-a_), S(-b_), S(-c_)}; }

  friend bool operator==(const InducedStructure& l, const InducedStructure& r) {
    return l.a_ == r.a_ && l.b_ == r.b_ && l.c_ == r.c_;
  }
  std::string str() const {
    using T = ScalarTraits<S>;
    return "(" + T::to_string(a_) + ")I+(" + T::to_string(b_) + ")J+(" + T::to_string(c_) + ")K";
  }

 private:
  S a_, b_, c_;
};

/// g L g^{-1}, returned as an induced structure.
template <class S>
InducedStructure<S> conjugate_structure(const UnitQuaternion<S>& g, const InducedStructure<S>& L) {
  Quaternion<S> r = g.quat() * L.quat() * g.quat().conj();
  return InducedStructure<S>(r.x, r.y, r.z, 1e-6);
}

namespace detail {

// Inverse stereographic projection R^3 -> S^3; rational in, rational out.
template <class S>
Quaternion<S> stereographic3(const S& t1, const S& t2, const S& t3) {
  S s = t1 * t1 + t2 * t2 + t3 * t3;
  S d = S(1) + s;
  return {S((S(1) - s) / d), S(2 * t1 / d), S(2 * t2 / d), S(2 * t3 / d)};
}

}  // namespace detail

/// Uniform on S^3 in float mode; an exact rational point of S^3 in exact mode.
template <class S>
UnitQuaternion<S> random_unit_quaternion(Rng& rng) {
  if constexpr (is_exact_v<S>) {
    S t1 = random_rational<S>(rng, 7, 5);
    S t2 = random_rational<S>(rng, 7, 5);
    S t3 = random_rational<S>(rng, 7, 5);
    Quaternion<S> q = detail::stereographic3(t1, t2, t3);
    // Rotate the coordinates so the projection pole is not always w = -1.
    long rot = uniform_int(rng, 0, 3);
    for (long r = 0; r < rot; ++r) q = Quaternion<S>(q.z, q.w, q.x, q.y);
    return UnitQuaternion<S>(q);
  } else {
    std::normal_distribution<double> nd;
    double w = nd(rng), x = nd(rng), y = nd(rng), z = nd(rng);
    double len = std::sqrt(w * w + x * x + y * y + z * z);
    return UnitQuaternion<S>(Quaternion<S>(w / len, x / len, y / len, z / len));
  }
}

template <class S>
InducedStructure<S> random_induced_structure(Rng& rng) {
  if constexpr (is_exact_v<S>) {
    S t1 = random_rational<S>(rng, 7, 5);
    S t2 = random_rational<S>(rng, 7, 5);
    S s = t1 * t1 + t2 * t2;
    S d = S(1) + s;
    std::array<S, 3> v{S((S(1) - s) / d), S(2 * t1 / d), S(2 * t2 / d)};
    long rot = uniform_int(rng, 0, 2);
    std::rotate(v.begin(), v.begin() + rot, v.end());
    if (uniform_int(rng, 0, 1) == 1) v[0] = -v[0];
    return InducedStructure<S>(v[0], v[1], v[2]);
  } else {
    std::normal_distribution<double> nd;
    double a = nd(rng), b = nd(rng), c = nd(rng);
    double len = std::sqrt(a * a + b * b + c * c);
    return InducedStructure<S>(a / len, b / len, c / len);
  }
}

}  // namespace hyperfiber
