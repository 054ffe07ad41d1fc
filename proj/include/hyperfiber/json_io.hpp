#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "hyperfiber/curvature.hpp"
#include "hyperfiber/errors.hpp"
#include "hyperfiber/form.hpp"
#include "hyperfiber/matrix.hpp"
#include "hyperfiber/quaternion.hpp"

namespace hyperfiber {

using json = nlohmann::json;

// Scalars are written as strings: "p/q" for rationals, 17 significant digits
// for doubles. Both round-trip bit-exactly.

template <class S>
json scalar_to_json(const S& s) {
  return ScalarTraits<S>::to_string(s);
}

template <class S>
S scalar_from_json(const json& j) {
  if (!j.is_string()) throw std::invalid_argument("expected a scalar string");
  return ScalarTraits<S>::from_string(j.get<std::string>());
}

template <class S>
json complex_to_json(const Complex<S>& c) {
  return json::array({scalar_to_json(c.re), scalar_to_json(c.im)});
}

template <class S>
Complex<S> complex_from_json(const json& j) {
  return Complex<S>(scalar_from_json<S>(j.at(0)), scalar_from_json<S>(j.at(1)));
}

template <class S>
json matrix_to_json(const CMatrix<S>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class S>
CMatrix<S> matrix_from_json(const json& j, std::size_t cols_if_empty = 0) {
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j.at(0).size() : cols_if_empty;
  CMatrix<S> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (j.at(i).size() != cols) throw std::invalid_argument("ragged matrix");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = complex_from_json<S>(j.at(i).at(k));
  }
  return m;
}

inline json mask_to_json(Mask m) {
  json idx = json::array();
  for (int b = 0; m >> b; ++b)
    if (m >> b & 1u) idx.push_back(b);
  return idx;
}

inline Mask mask_from_json(const json& j, int N) {
  Mask m = 0;
  int prev = -1;
  for (const auto& v : j) {
    int b = v.get<int>();
    if (b <= prev || b >= 2 * N) throw std::invalid_argument("multi-index not strictly increasing or out of range");
    m |= Mask(1) << b;
    prev = b;
  }
  return m;
}

/// {"N": N, "terms": [[indices, re, im], ...]}; index k < N is z_{k+1}, k >= N is zbar_{k-N+1}.
template <class S>
json form_to_json(const Form<S>& f) {
  json terms = json::array();
  for (const auto& [m, c] : f.terms()) terms.push_back(json::array({mask_to_json(m), scalar_to_json(c.re), scalar_to_json(c.im)}));
  return json{{"N", f.N()}, {"terms", terms}};
}

template <class S>
Form<S> form_from_json(const json& j) {
  const int N = j.at("N").get<int>();
  Form<S> f(N);
  for (const auto& t : j.at("terms")) {
    Mask m = mask_from_json(t.at(0), N);
    if (f.find(m)) throw std::invalid_argument("duplicate monomial in form");
    f.add_term(m, Complex<S>(scalar_from_json<S>(t.at(1)), scalar_from_json<S>(t.at(2))));
  }
  return f;
}

/// {"N": N, "rows": r, "cols": c, "terms": [[indices, matrix], ...]}
template <class S>
json bundle_to_json(const BundleForm<S>& f, std::size_t rows, std::size_t cols) {
  json terms = json::array();
  for (const auto& [m, c] : f.terms()) terms.push_back(json::array({mask_to_json(m), matrix_to_json(c)}));
  return json{{"N", f.N()}, {"rows", rows}, {"cols", cols}, {"terms", terms}};
}

template <class S>
BundleForm<S> bundle_from_json(const json& j) {
  const int N = j.at("N").get<int>();
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  BundleForm<S> f(N);
  for (const auto& t : j.at("terms")) {
    CMatrix<S> c = matrix_from_json<S>(t.at(1), cols);
    if (c.rows() != rows || c.cols() != cols) throw std::invalid_argument("bundle coefficient has the wrong shape");
    f.add_term(mask_from_json(t.at(0), N), c);
  }
  return f;
}

template <class S>
json quaternion_to_json(const Quaternion<S>& q) {
  return json::array({scalar_to_json(q.w), scalar_to_json(q.x), scalar_to_json(q.y), scalar_to_json(q.z)});
}

template <class S>
Quaternion<S> quaternion_from_json(const json& j) {
  return Quaternion<S>(scalar_from_json<S>(j.at(0)), scalar_from_json<S>(j.at(1)), scalar_from_json<S>(j.at(2)),
                       scalar_from_json<S>(j.at(3)));
}

template <class S>
json structure_to_json(const InducedStructure<S>& L) {
  return json::array({scalar_to_json(L.a()), scalar_to_json(L.b()), scalar_to_json(L.c())});
}

template <class S>
InducedStructure<S> structure_from_json(const json& j) {
  return InducedStructure<S>(scalar_from_json<S>(j.at(0)), scalar_from_json<S>(j.at(1)),
                             scalar_from_json<S>(j.at(2)));
}

template <class S>
json second_form_to_json(const SecondForm<S>& a) {
  json ms = json::array();
  for (const auto& m : a.A) ms.push_back(matrix_to_json(m));
  return json{{"N", a.N}, {"sub_rank", a.sub_rank}, {"quot_rank", a.quot_rank}, {"A", ms}};
}

template <class S>
SecondForm<S> second_form_from_json(const json& j) {
  SecondForm<S> a;
  a.N = j.at("N").get<int>();
  a.sub_rank = j.at("sub_rank").get<std::size_t>();
  a.quot_rank = j.at("quot_rank").get<std::size_t>();
  for (const auto& m : j.at("A")) {
    CMatrix<S> c = matrix_from_json<S>(m, a.sub_rank);
    if (c.rows() != a.quot_rank || c.cols() != a.sub_rank) throw std::invalid_argument("second form block has the wrong shape");
    a.A.push_back(std::move(c));
  }
  if (static_cast<int>(a.A.size()) != a.N) throw std::invalid_argument("second form needs one block per z_k");
  return a;
}

}  // namespace hyperfiber
