#pragma once

#include "hyperfiber/errors.hpp"
#include "hyperfiber/fiber_model.hpp"
#include "hyperfiber/form.hpp"
#include "hyperfiber/kahler.hpp"
#include "hyperfiber/quaternion.hpp"
#include "hyperfiber/rng.hpp"

namespace hyperfiber {

/// Projection onto SU(2)-invariant 2-forms: (eta + I eta + J eta + K eta) / 4.
/// On 2-forms the actions of I, J, K are commuting involutions.
template <class S, class C>
BasicForm<S, C> invariant_projection(const FiberModel<S>& model, const BasicForm<S, C>& eta) {
  if (!eta.has_degree(2)) throw DegreeError("invariant_projection: expected a 2-form");
  BasicForm<S, C> r = eta + model.act_I(eta) + model.act_J(eta) + model.act_K(eta);
  return Complex<S>(ScalarTraits<S>::from_ratio(1, 4)) * r;
}

template <class S>
struct WeightSplit {
  Form<S> eta0;     // SU(2)-invariant part
  Form<S> etaPlus;  // pure weight 2 part
};

/// eta_+ = eta - eta_0. For (1,1)_I forms this must agree with (eta - K eta)/2;
/// a disagreement means the covector dictionary is inconsistent.
template <class S>
Form<S> weight2_part(const FiberModel<S>& model, const Form<S>& eta, double tol = kDefaultTolerance) {
  Form<S> plus = eta - invariant_projection(model, eta);
  const double scale = max_abs_coeff(eta);
  if (near_zero(eta.bidegree_part(2, 0), tol, scale) && near_zero(eta.bidegree_part(0, 2), tol, scale)) {
    Form<S> alt = Complex<S>(ScalarTraits<S>::from_ratio(1, 2)) * (eta - model.act_K(eta));
    if (!near(plus, alt, tol))
      throw ConventionError("weight2_part: eta - eta_0 differs from (eta - K eta)/2 on a (1,1)_I form");
  }
  return plus;
}

template <class S>
WeightSplit<S> weight_split(const FiberModel<S>& model, const Form<S>& eta, double tol = kDefaultTolerance) {
  WeightSplit<S> w;
  w.eta0 = invariant_projection(model, eta);
  w.etaPlus = weight2_part(model, eta, tol);
  return w;
}

/// (2,0)_K component of a pure weight 2, (1,1)_I form.
template <class S>
Form<S> to_K20(const FiberModel<S>& model, const Form<S>& etaPlus, double tol = kDefaultTolerance) {
  if (!etaPlus.has_degree(2)) throw DegreeError("to_K20: expected a 2-form");
  const double scale = max_abs_coeff(etaPlus);
  if (!near_zero(invariant_projection(model, etaPlus), tol, scale))
    throw TypeError("to_K20: input is not pure of weight 2");
  if (!near_zero(etaPlus.bidegree_part(2, 0), tol, scale) || !near_zero(etaPlus.bidegree_part(0, 2), tol, scale))
    throw TypeError("to_K20: input is not of type (1,1)_I");
  return type_component(model, etaPlus, InducedStructure<S>::K(), 2, 0);
}

/// Inverse of to_K20: rho + I(rho), since I swaps (2,0)_K and (0,2)_K and fixes
/// (1,1)_I forms. The result is real iff I(rho) = conj(rho).
template <class S>
Form<S> from_K20(const FiberModel<S>& model, const Form<S>& rho, double tol = kDefaultTolerance) {
  if (!rho.has_degree(2)) throw DegreeError("from_K20: expected a 2-form");
  if (!is_of_type(model, rho, InducedStructure<S>::K(), 2, 0, tol))
    throw TypeError("from_K20: input is not of type (2,0)_K");
  return rho + model.act_I(rho);
}

/// rho' + conj(I rho'): a (2,0)_K form satisfying I(rho) = conj(rho).
template <class S>
Form<S> real_structure_K20(const FiberModel<S>& model, const Form<S>& rho) {
  return rho + conj(model.act_I(rho));
}

/// SU(2)-invariance: (p,p) for I and for J (these generate SU(2)), plus a
/// spot check against random unit quaternions.
template <class S>
bool is_invariant(const FiberModel<S>& model, const Form<S>& f, double tol = kDefaultTolerance,
                  std::uint64_t spot_seed = 0x5eedULL, int spot_checks = 5) {
  model.check(f);
  if (f.is_zero()) return true;
  auto d = f.homogeneous_degree();
  if (!d) throw DegreeError("is_invariant: form is not homogeneous");
  if (*d % 2 != 0) return false;
  const int p = *d / 2;
  const bool pp = is_of_type(model, f, InducedStructure<S>::I(), p, p, tol) &&
                  is_of_type(model, f, InducedStructure<S>::J(), p, p, tol);
  if (*d == 2) {
    const bool fixed = near(invariant_projection(model, f), f, tol);
    if (fixed != pp) throw ConventionError("is_invariant: (p,p) criterion and projector disagree");
  }
  if (pp) {
    Rng rng = derive_rng(spot_seed, 0x1a7, static_cast<std::uint64_t>(f.size()));
    for (int t = 0; t < spot_checks; ++t) {
      UnitQuaternion<S> g = random_unit_quaternion<S>(rng);
      if (!near(model.act(g, f), f, tol))
        throw ConventionError("is_invariant: (p,p) form moved by a unit quaternion");
    }
  }
  return pp;
}

}  // namespace hyperfiber
