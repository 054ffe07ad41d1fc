#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "hyperfiber/curvature.hpp"
#include "hyperfiber/errors.hpp"
#include "hyperfiber/fiber_model.hpp"
#include "hyperfiber/form.hpp"
#include "hyperfiber/json_io.hpp"
#include "hyperfiber/kahler.hpp"
#include "hyperfiber/quaternion.hpp"
#include "hyperfiber/report.hpp"
#include "hyperfiber/rng.hpp"
#include "hyperfiber/su2_decomp.hpp"

namespace hyperfiber {

inline constexpr std::size_t kMaxStoredFailures = 20;
inline constexpr int kMaxDegenerateRetries = 8;

struct CheckFailure {
  std::string check;
  std::string message;
};

template <class S>
struct Evaluation {
  std::vector<CheckFailure> failures;
  std::map<std::string, S> measures;
  bool degenerate = false;

  void expect(bool ok, const std::string& check, const std::string& message = "") {
    if (!ok) failures.push_back({check, message.empty() ? check + " violated" : message});
  }
  bool failed(const std::string& check) const {
    return std::any_of(failures.begin(), failures.end(), [&](const CheckFailure& f) { return f.check == check; });
  }
};

template <class S>
struct SampleRecord {
  enum class Status { pass, fail, degenerate };
  Status status = Status::degenerate;
  long degenerate_attempts = 0;
  std::vector<Failure> failures;
  std::map<std::string, S> measures;
  json instance;
};

/// Shared read-only state for one run.
template <class S>
struct SuiteContext {
  SuiteConfig cfg;
  FiberModel<S> model;
  KahlerData<S> kd;
  double tol;
  std::optional<EFormResult<S>> eform;

  explicit SuiteContext(const SuiteConfig& c)
      : cfg(c), model(c.n, c.fault_inject), kd(model), tol(c.tolerance) {}
  int N() const { return model.N(); }
};

namespace detail {

template <class S>
bool nonneg(const S& x, double tol, double scale = 1.0) {
  if constexpr (is_exact_v<S>)
    return sgn(x) >= 0;
  else
    return x >= -tol * std::max(1.0, scale);
}

template <class S>
bool positive(const S& x, double tol, double scale = 1.0) {
  if constexpr (is_exact_v<S>)
    return sgn(x) > 0;
  else
    return x > tol * std::max(1.0, scale);
}

template <class S>
CMatrix<S> random_hermitian(int N, Rng& rng) {
  CMatrix<S> x(N, N);
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l) x(k, l) = random_complex<S>(rng);
  return Complex<S>(ScalarTraits<S>::from_ratio(1, 2)) * (x + x.adjoint());
}

/// sum of 1..N random rank-one terms v v^dagger.
template <class S>
CMatrix<S> random_psd(int N, Rng& rng) {
  CMatrix<S> h(N, N);
  long terms = uniform_int(rng, 1, N);
  for (long t = 0; t < terms; ++t) {
    CMatrix<S> v(N, 1);
    for (int k = 0; k < N; ++k) v(k, 0) = random_gaussian_int<S>(rng, 2);
    h += v * v.adjoint();
  }
  return h;
}

template <class S>
Form<S> random_real_2form(int N, Rng& rng) {
  return real_part(random_form<S>(N, 2, rng));
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

template <class S>
Constant make_constant(const S& v) {
  Constant c;
  if constexpr (is_exact_v<S>) c.exact = ScalarTraits<S>::to_string(v);
  c.value = ScalarTraits<S>::to_double(v);
  return c;
}

template <class S>
bool same_value(const S& a, const S& b, double tol) {
  return ScalarTraits<S>::near(a, b, tol);
}

}  // namespace detail

/// A named verification suite. `generate` draws raw random input and is kept
/// free of model-dependent checks, so every check runs inside `evaluate` and
/// can be replayed from the serialized instance.
template <class S>
class Suite {
 public:
  virtual ~Suite() = default;
  virtual std::string name() const = 0;
  virtual std::string description() const = 0;
  virtual void validate(const SuiteConfig&) const {}
  virtual void prepare(SuiteContext<S>&) const {}
  virtual std::optional<json> generate(const SuiteContext<S>& ctx, Rng& rng, long sample) const = 0;
  virtual Evaluation<S> evaluate(const SuiteContext<S>& ctx, const json& instance) const = 0;
  virtual void finalize(const SuiteContext<S>&, const std::vector<SampleRecord<S>>&, VerificationReport&) const {}
  /// (n, rank) pairs covered by run_all; rank 0 means the suite ignores rank.
  virtual std::vector<std::pair<int, int>> grid() const { return {{1, 0}, {2, 0}, {3, 0}}; }

 protected:
  /// Cross-sample check: measure `key` takes one value over all samples.
  static std::optional<S> check_constant(const SuiteContext<S>& ctx, const std::vector<SampleRecord<S>>& recs,
                                         const std::string& key, const std::string& check, VerificationReport& rep) {
    std::optional<S> ref;
    for (std::size_t i = 0; i < recs.size(); ++i) {
      auto it = recs[i].measures.find(key);
      if (it == recs[i].measures.end()) continue;
      if (!ref) {
        ref = it->second;
        continue;
      }
      if (!detail::same_value(*ref, it->second, ctx.tol)) {
        json data{{"instance", recs[i].instance}, {"measure", key}, {"reference", scalar_to_json(*ref)}};
        rep.failures.push_back(Failure{static_cast<long>(i), check,
                                       key + " = " + ScalarTraits<S>::to_string(it->second) + " differs from " +
                                           ScalarTraits<S>::to_string(*ref),
                                       data});
      }
    }
    return ref;
  }
};

// ---------------------------------------------------------------- lemma26

template <class S>
class Lemma26Suite : public Suite<S> {
 public:
  std::string name() const override { return "lemma26"; }
  std::string description() const override { return "Lambda_L vanishes on SU(2)-invariant 2-forms"; }

  std::optional<json> generate(const SuiteContext<S>& ctx, Rng& rng, long) const override {
    const int N = ctx.N();
    Form<S> eta = invariant_projection(ctx.model, detail::random_real_2form<S>(N, rng));
    if (eta.is_zero()) return std::nullopt;
    json Ls = json::array();
    for (int t = 0; t < 10; ++t) Ls.push_back(structure_to_json(random_induced_structure<S>(rng)));
    return json{{"eta", form_to_json(eta)},
                {"eta_random", form_to_json(detail::random_real_2form<S>(N, rng))},
                {"structures", Ls}};
  }

  Evaluation<S> evaluate(const SuiteContext<S>& ctx, const json& inst) const override {
    Evaluation<S> ev;
    const auto& M = ctx.model;
    const Form<S> eta = form_from_json<S>(inst.at("eta"));
    const Form<S> eta_r = form_from_json<S>(inst.at("eta_random"));
    ev.expect(near(M.act_I(eta), eta, ctx.tol) && near(M.act_J(eta), eta, ctx.tol) && near(M.act_K(eta), eta, ctx.tol),
              "eta_invariant", "input is not fixed by the I, J, K actions");
    const double scale = max_abs_coeff(eta);
    S worst(0);
    bool first = true;
    for (const auto& jl : inst.at("structures")) {
      const InducedStructure<S> L = structure_from_json<S>(jl);
      const LambdaOperator<S> lam(ctx.kd, L);
      const Complex<S> v = lam(eta);
      if (magnitude(v) > ScalarTraits<S>::to_double(worst)) worst = S(magnitude(v));
      ev.expect(near_zero(v, ctx.tol, scale), "lambda_zero", "Lambda_L(eta) = " + to_string(v) + " for L = " + L.str());
      if (first) {
        // Two independent computations of the degree integrand.
        first = false;
        const DegreeIntegrand<S> deg(ctx.kd, L);
        const Complex<S> f(ScalarTraits<S>::from_int(factorial(ctx.N() - 1)));
        const Complex<S> d_inv = deg.raw(eta);
        ev.expect(near_zero(d_inv, ctx.tol, scale), "degree_zero", "degree integrand of invariant form is " + to_string(d_inv));
        const Complex<S> d = deg.raw(eta_r);
        const Complex<S> via_lambda = f * lam(eta_r);
        ev.expect(near(d, via_lambda, ctx.tol), "degree_lambda_consistency",
                  "eta ^ omega^{N-1} gives " + to_string(d) + ", (N-1)! Lambda gives " + to_string(via_lambda));
      }
    }
    ev.measures["max_abs_lambda"] = worst;
    return ev;
  }

  void finalize(const SuiteContext<S>&, const std::vector<SampleRecord<S>>& recs,
                VerificationReport& rep) const override {
    S worst(0);
    for (const auto& r : recs) {
      auto it = r.measures.find("max_abs_lambda");
      if (it != r.measures.end() && it->second > worst) worst = it->second;
    }
    rep.constants["max_abs_lambda"] = detail::make_constant(worst);
  }
};

// ---------------------------------------------------------------- lemma27

template <class S>
class Lemma27Suite : public Suite<S> {
 public:
  std::string name() const override { return "lemma27"; }
  std::string description() const override { return "SU(2)-invariance is equivalent to type (p,p) for all L"; }

  std::optional<json> generate(const SuiteContext<S>& ctx, Rng& rng, long) const override {
    const int N = ctx.N();
    Form<S> a = invariant_projection(ctx.model, detail::random_real_2form<S>(N, rng));
    Form<S> b = invariant_projection(ctx.model, detail::random_real_2form<S>(N, rng));
    if (a.is_zero() || b.is_zero()) return std::nullopt;
    json Ls = json::array();
    for (int t = 0; t < 3; ++t) Ls.push_back(structure_to_json(random_induced_structure<S>(rng)));
    return json{{"eta", form_to_json(detail::random_real_2form<S>(N, rng))},
                {"eta0", form_to_json(a)},
                {"eta0b", form_to_json(b)},
                {"structures", Ls},
                {"g", quaternion_to_json(random_unit_quaternion<S>(rng).quat())}};
  }

  Evaluation<S> evaluate(const SuiteContext<S>& ctx, const json& inst) const override {
    Evaluation<S> ev;
    const auto& M = ctx.model;
    const auto& kd = ctx.kd;
    const double tol = ctx.tol;
    const int N = ctx.N();
    const Form<S> eta = form_from_json<S>(inst.at("eta"));
    const Form<S> a = form_from_json<S>(inst.at("eta0"));
    const Form<S> b = form_from_json<S>(inst.at("eta0b"));
    const UnitQuaternion<S> g(quaternion_from_json<S>(inst.at("g")), 1e-9);
    std::vector<InducedStructure<S>> Ls;
    for (const auto& jl : inst.at("structures")) Ls.push_back(structure_from_json<S>(jl));

    ev.expect(is_invariant(M, a, tol), "invariant_detected", "is_invariant rejects an invariant 2-form");
    ev.expect(!is_invariant(M, eta, tol), "noninvariant_detected", "is_invariant accepts a generic 2-form");
    const Form<S> pa = invariant_projection(M, eta);
    ev.expect(near(invariant_projection(M, pa), pa, tol), "projector_idempotent");
    ev.expect(near(invariant_projection(M, M.act_I(eta)), M.act_I(pa), tol) &&
                  near(invariant_projection(M, M.act_J(eta)), M.act_J(pa), tol) &&
                  near(invariant_projection(M, M.act_K(eta)), M.act_K(pa), tol),
              "projector_commutes");
    ev.expect(near(M.act(g, a), a, tol), "su2_fixed", "invariant 2-form moved by a unit quaternion");
    ev.expect(near(M.act(g, pa), pa, tol), "projector_haar", "finite average is not fixed by a unit quaternion");

    const Form<S> phi = wedge(a, b);
    ev.expect(is_invariant(M, phi, tol), "invariant_4form_detected");
    for (const auto& L : Ls) {
      ev.expect(is_of_type(M, a, L, 1, 1, tol), "pp_for_all_L", "invariant 2-form not (1,1) for L = " + L.str());
      ev.expect(is_of_type(M, phi, L, 2, 2, tol), "pp_for_all_L", "invariant 4-form not (2,2) for L = " + L.str());
    }
    // invariant 4-forms pair identically with omega_L^{N-2} for every L
    const Complex<S> pI = kd.vol_coefficient(wedge(phi, power(kd.omega_I(), N - 2)));
    const Complex<S> pJ = kd.vol_coefficient(wedge(phi, power(kd.omega_J(), N - 2)));
    const Complex<S> pL = kd.vol_coefficient(wedge(phi, power(kd.omega(Ls.front()), N - 2)));
    ev.expect(near(pI, pJ, tol) && near(pI, pL, tol), "invariant_pairing_L_independent",
              "pairings " + to_string(pI) + ", " + to_string(pJ) + ", " + to_string(pL));
    return ev;
  }
};

// ---------------------------------------------------------------- lemma52

template <class S>
class Lemma52Suite : public Suite<S> {
 public:
  std::string name() const override { return "lemma52"; }
  std::string description() const override { return "positivity of r2 ^ omega^{N-3} and the B/C coefficient formulas"; }

  void validate(const SuiteConfig& cfg) const override {
    if (2 * cfg.n < 3) throw ConfigError("lemma52 needs complex dimension N = 2n >= 3 (n >= 2)");
  }
  std::vector<std::pair<int, int>> grid() const override {
    std::vector<std::pair<int, int>> g;
    for (int n : {2, 3})
      for (int r : {2, 3, 4}) g.emplace_back(n, r);
    return g;
  }

  std::optional<json> generate(const SuiteContext<S>& ctx, Rng& rng, long) const override {
    const int r = ctx.cfg.rank;
    BundleForm<S> theta = random_invariant_ym_curvature(ctx.model, r, rng, true);
    if (theta.is_zero()) return std::nullopt;
    json c = json::array();
    for (int k = 0; k < ctx.N(); ++k) c.push_back(complex_to_json(random_gaussian_int<S>(rng, 3)));
    return json{{"rank", r}, {"theta", bundle_to_json(theta, r, r)}, {"c", c}};
  }

  Evaluation<S> evaluate(const SuiteContext<S>& ctx, const json& inst) const override {
    Evaluation<S> ev;
    const auto& M = ctx.model;
    const auto& kd = ctx.kd;
    const double tol = ctx.tol;
    const int N = ctx.N();
    const auto r = inst.at("rank").get<std::size_t>();
    const BundleForm<S> theta = bundle_from_json<S>(inst.at("theta"));
    const double scale = max_abs_coeff(theta);

    const CurvatureContract cc = check_curvature(M, theta, r, tol);
    ev.expect(cc.invariant, "generator_invariant");
    ev.expect(cc.lambda_zero, "generator_lambda_zero");
    ev.expect(cc.real, "generator_reality");
    ev.expect(cc.traceless, "generator_traceless");

    const auto A = curvature_blocks(theta, r);
    CMatrix<S> sum(r, r);
    for (int k = 0; k < N; ++k) sum += A[k][k];
    ev.expect(near_zero(sum, tol, scale), "sum_Akk_zero");
    for (int k = 0; k + 1 < N; k += 2)
      ev.expect(near(A[k][k], -A[k + 1][k + 1], tol), "Akk_partner",
                "A_kk != -A_{k+1,k+1} for k = " + std::to_string(k + 1));

    const Form<S> r2f = r2(theta);
    ev.expect(is_invariant(M, r2f, tol), "r2_invariant");
    const Form<S> nu = wedge(r2f, power(kd.omega_I(), N - 3));
    ev.expect(is_positive_codim1(kd, nu, tol), "codim1_positive", "r2 ^ omega^{N-3} is not positive");

    const CMatrix<S> Bd = b_coefficients(kd, theta, r, BMethod::direct);
    const CMatrix<S> Bf = b_coefficients(kd, theta, r, BMethod::formula);
    S disc(0);
    const double bscale = std::max(max_abs(Bd), 1.0);
    for (int i = 0; i < N; ++i) {
      const Complex<S> diff = Bd(i, i) - Bf(i, i);
      if (diff.norm2() > disc) disc = diff.norm2();
      ev.expect(near(Bd(i, i), Bf(i, i), tol), "B_formula_matches_direct",
                "B_" + std::to_string(i + 1) + std::to_string(i + 1) + ": direct " + to_string(Bd(i, i)) +
                    ", formula " + to_string(Bf(i, i)));
      ev.expect(detail::nonneg(Bd(i, i).re, tol, bscale) && near_zero(Complex<S>(Bd(i, i).im), tol, bscale),
                "B_ii_nonnegative", "B_ii = " + to_string(Bd(i, i)));
      const CiiResult<S> c = c_ii(theta, r, i);
      const double cscale = std::max({1.0, magnitude(c.definition), magnitude(c.final_form)});
      ev.expect(near(c.definition, c.final_form, tol), "C_ii_identity",
                "definition " + to_string(c.definition) + " vs final " + to_string(c.final_form));
      ev.expect(near(c.definition, c.intermediate, tol), "C_ii_intermediate");
      ev.expect(detail::nonneg(c.definition.re, tol, cscale) && near_zero(Complex<S>(c.definition.im), tol, cscale),
                "C_ii_nonnegative", "C_ii = " + to_string(c.definition));
    }
    ev.measures["b_discrepancy_norm2"] = disc;

    // direct evaluation of [sqrt(-1) nu ^ z_c ^ zbar_c]_Vol for a random c
    Form<S> zc(N), zbc(N);
    for (int k = 0; k < N; ++k) {
      const Complex<S> ck = complex_from_json<S>(inst.at("c").at(k));
      zc.add_term(Mask(1) << k, ck);
      zbc.add_term(Mask(1) << (N + k), ck.conj());
    }
    const Complex<S> q = kd.vol_coefficient(Complex<S>::i() * wedge(nu, wedge(zc, zbc)));
    ev.expect(detail::nonneg(q.re, tol, magnitude(q)) && near_zero(Complex<S>(q.im), tol, magnitude(q)),
              "basis_bridge", "sqrt(-1) nu ^ z_c ^ zbar_c = " + to_string(q) + " Vol");
    return ev;
  }

  void finalize(const SuiteContext<S>&, const std::vector<SampleRecord<S>>& recs,
                VerificationReport& rep) const override {
    S worst(0);
    for (const auto& r : recs) {
      auto it = r.measures.find("b_discrepancy_norm2");
      if (it != r.measures.end() && it->second > worst) worst = it->second;
    }
    rep.constants["b_formula_max_discrepancy_norm2"] = detail::make_constant(worst);
  }
};

// ---------------------------------------------------------------- lemma72

template <class S>
class Lemma72Suite : public Suite<S> {
 public:
  std::string name() const override { return "lemma72"; }
  std::string description() const override {
    return "weight split vs K-Hodge split, K20 correspondence, real structure, rotated positivity conditions";
  }

  std::optional<json> generate(const SuiteContext<S>& ctx, Rng& rng, long) const override {
    const int N = ctx.N();
    return json{{"eta", form_to_json(form_from_hermitian(detail::random_hermitian<S>(N, rng)))},
                {"xi", form_to_json(random_form<S>(N, 2, rng))},
                {"positive", form_to_json(form_from_hermitian(detail::random_psd<S>(N, rng)))}};
  }

  Evaluation<S> evaluate(const SuiteContext<S>& ctx, const json& inst) const override {
    Evaluation<S> ev;
    const auto& M = ctx.model;
    const auto& kd = ctx.kd;
    const double tol = ctx.tol;
    const auto K = InducedStructure<S>::K();
    const auto I = InducedStructure<S>::I();
    const Form<S> eta = form_from_json<S>(inst.at("eta"));
    const Form<S> xi = form_from_json<S>(inst.at("xi"));
    const Form<S> pos = form_from_json<S>(inst.at("positive"));
    const int N = ctx.N();

    auto parts = hodge_type_decompose(M, eta, K);
    auto get = [&](int p, int q) {
      auto it = parts.find({p, q});
      return it == parts.end() ? Form<S>(N) : it->second;
    };
    const Form<S> k11 = get(1, 1), k2002 = get(2, 0) + get(0, 2);
    const WeightSplit<S> ws = weight_split(M, eta, tol);
    ev.expect(near(ws.eta0 + ws.etaPlus, eta, tol), "split_reconstructs");
    ev.expect(near(ws.eta0, k11, tol), "eta0_equals_K11");
    ev.expect(near(ws.etaPlus, k2002, tol), "etaPlus_equals_K20_plus_K02");
    ev.expect(near(M.act_K(k11), k11, tol), "K_fixes_K11");
    ev.expect(near(M.act_K(k2002), -k2002, tol), "K_negates_K20_K02");
    ev.expect(near(M.act_I(ws.eta0), ws.eta0, tol) && near(M.act_J(ws.eta0), ws.eta0, tol) &&
                  near(M.act_K(ws.eta0), ws.eta0, tol),
              "eta0_invariant");
    ev.expect(near_zero(invariant_projection(M, ws.etaPlus), tol, max_abs_coeff(eta)), "etaPlus_pure_weight2");

    const Form<S> rho = to_K20(M, ws.etaPlus, tol);
    ev.expect(near(from_K20(M, rho, tol), ws.etaPlus, tol), "K20_roundtrip");
    ev.expect(near(M.act_I(rho), conj(rho), tol), "K20_real_structure", "I(rho) != conj(rho) for rho = to_K20(eta_+)");

    const Form<S> rp = type_component(M, xi, K, 2, 0);
    const Form<S> rr = real_structure_K20(M, rp);
    ev.expect(is_of_type(M, rr, K, 2, 0, tol), "real_structure_type");
    ev.expect(near(M.act_I(rr), conj(rr), tol) && is_real(from_K20(M, rr, tol), tol),
              "real_structure_correspondence");
    ev.expect(is_real(from_K20(M, rp, tol), tol) == near(M.act_I(rp), conj(rp), tol), "real_iff_I_conj");

    // rotate K-side forms by g (K -> I, I -> J) and compare the predicates.
    const UnitQuaternion<S> g = rotation_K_to_I<S>();
    const Form<S> rho_pos = to_K20(M, weight2_part(M, pos, tol), tol);
    ev.expect(is_K_positive(kd, rho_pos, tol), "K_positive_from_positive_form");
    int positive_cases = 0;
    for (const Form<S>* r8 : {&rho_pos, &rr}) {
      const Form<S> eta8 = M.act(g, *r8);
      ev.expect(is_of_type(M, eta8, I, 2, 0, tol), "rotated_type", "g-rotated form is not of type (2,0)_I");
      const RotatedPositivity<S> rp8 = rotated_positivity_conditions(kd, eta8, tol);
      ev.expect(rp8.reality, "rotated_reality", "J eta != conj(eta) for the rotated form");
      const bool kpos = is_K_positive(kd, M.act(g.inverse(), eta8), tol);
      ev.expect(rp8.positive == kpos, "rotated_equivalence",
                std::string("eta(x, J xbar) >= 0 is ") + (rp8.positive ? "true" : "false") + " but K-positivity is " +
                    (kpos ? "true" : "false"));
      positive_cases += rp8.positive ? 1 : 0;
    }
    ev.measures["rotated_positive_cases"] = S(positive_cases);
    return ev;
  }

  void finalize(const SuiteContext<S>&, const std::vector<SampleRecord<S>>& recs,
                VerificationReport& rep) const override {
    long pos = 0, total = 0;
    for (const auto& r : recs) {
      auto it = r.measures.find("rotated_positive_cases");
      if (it == r.measures.end()) continue;
      pos += static_cast<long>(ScalarTraits<S>::to_double(it->second));
      total += 2;
    }
    rep.constants["rotated_positive_fraction"] =
        Constant{std::nullopt, total ? static_cast<double>(pos) / static_cast<double>(total) : 0.0};
  }
};

// ---------------------------------------------------------------- lemma74

template <class S>
class Lemma74Suite : public Suite<S> {
 public:
  std::string name() const override { return "lemma74"; }
  std::string description() const override { return "E-form constant c_n and the pointwise degree identity"; }

  void prepare(SuiteContext<S>& ctx) const override { ctx.eform = e_form(ctx.kd, ctx.tol); }

  std::optional<json> generate(const SuiteContext<S>& ctx, Rng& rng, long) const override {
    return json{{"eta", form_to_json(form_from_hermitian(detail::random_hermitian<S>(ctx.N(), rng)))}};
  }

  Evaluation<S> evaluate(const SuiteContext<S>& ctx, const json& inst) const override {
    Evaluation<S> ev;
    const auto& M = ctx.model;
    const auto& kd = ctx.kd;
    const double tol = ctx.tol;
    const EFormResult<S>& E = *ctx.eform;
    ev.expect(E.proportional, "E_proportional", "E^{N-1,N-1}_I is not a multiple of omega_I^{N-1}");
    ev.expect(E.c_n.has_value() && E.positive, "c_n_positive");
    if (M.n() == 1) ev.expect(E.c_n && detail::same_value(*E.c_n, S(1), tol), "c1_equals_one");

    const Form<S> eta = form_from_json<S>(inst.at("eta"));
    const Form<S> k20 = type_component(M, eta, InducedStructure<S>::K(), 2, 0);
    const Form<S> kw = wedge(k20, E.E);
    ev.expect(near(kw, wedge(eta, E.E), tol), "K20_wedge_E", "eta^{2,0}_K ^ E != eta ^ E");
    const S lam = DegreeIntegrand<S>(kd, InducedStructure<S>::I())(eta, tol);
    const Complex<S> den = kd.vol_coefficient(kw);
    if (near_zero(den, tol, max_abs_coeff(eta))) {
      ev.expect(ScalarTraits<S>::near_zero(lam, tol, max_abs_coeff(eta)), "degree_identity_zero");
      ev.degenerate = ev.failures.empty();
      return ev;
    }
    const Complex<S> kappa = Complex<S>(lam) / den;
    ev.expect(near_zero(Complex<S>(kappa.im), tol, magnitude(kappa)), "kappa_real");
    ev.measures["kappa"] = kappa.re;
    if (E.c_n)
      ev.expect(detail::same_value(kappa.re, *E.c_n, tol), "kappa_equals_c_n",
                "degree / [eta^{2,0}_K ^ E] = " + to_string(kappa) + ", c_n = " + ScalarTraits<S>::to_string(*E.c_n));
    return ev;
  }

  void finalize(const SuiteContext<S>& ctx, const std::vector<SampleRecord<S>>& recs,
                VerificationReport& rep) const override {
    const EFormResult<S>& E = *ctx.eform;
    const int n = ctx.model.n();
    if (E.c_n) rep.constants["c_" + std::to_string(n)] = detail::make_constant(*E.c_n);
    const S ref = S(S(1) / S(1L << (n - 1)));
    rep.constants["reference_two_pow_minus_n_minus_1"] = detail::make_constant(ref);
    if (auto kappa = this->check_constant(ctx, recs, "kappa", "kappa_constant", rep)) {
      rep.constants["kappa"] = detail::make_constant(*kappa);
      rep.constants["kappa_over_reference_factor"] = detail::make_constant(S(*kappa / ref));
    }
  }
};

// ---------------------------------------------------------------- lemma92

template <class S>
class Lemma92Suite : public Suite<S> {
 public:
  std::string name() const override { return "lemma92"; }
  std::string description() const override { return "positivity and nondegeneracy of eta_+ for positive eta"; }

  std::optional<json> generate(const SuiteContext<S>& ctx, Rng& rng, long) const override {
    CMatrix<S> h = detail::random_psd<S>(ctx.N(), rng);
    if (h.is_zero()) return std::nullopt;
    return json{{"eta", form_to_json(form_from_hermitian(h))}};
  }

  Evaluation<S> evaluate(const SuiteContext<S>& ctx, const json& inst) const override {
    Evaluation<S> ev;
    const auto& M = ctx.model;
    const double tol = ctx.tol;
    const Form<S> eta = form_from_json<S>(inst.at("eta"));
    const double scale = max_abs_coeff(eta);
    ev.expect(is_positive_11(eta, tol), "input_positive");
    const Form<S> plus = weight2_part(M, eta, tol);
    ev.expect(near(plus, Complex<S>(ScalarTraits<S>::from_ratio(1, 2)) * (eta - M.act_K(eta)), tol), "weight2_routes");
    ev.expect(eta.is_zero() || !near_zero(plus, tol, scale), "etaPlus_nonzero", "eta_+ = 0 for a nonzero positive eta");
    ev.expect(is_positive_11(plus, tol), "etaPlus_positive", "eta_+ is not positive");
    ev.expect(is_positive_11(-M.act_K(eta), tol), "minus_K_positive", "-K(eta) is not positive");
    ev.expect(is_K_positive(ctx.kd, to_K20(M, plus, tol), tol), "K20_K_positive");
    return ev;
  }
};

// ---------------------------------------------------------------- sec9

template <class S>
class Sec9Suite : public Suite<S> {
 public:
  std::string name() const override { return "sec9"; }
  std::string description() const override { return "sub-bundle curvature identity and positivity of -Tr Theta'"; }

  void validate(const SuiteConfig& cfg) const override {
    if (cfg.rank < 2) throw ConfigError("sec9 needs rank >= 2 (a proper sub-bundle)");
  }
  std::vector<std::pair<int, int>> grid() const override {
    std::vector<std::pair<int, int>> g;
    for (int n : {1, 2, 3})
      for (int r : {2, 3, 4}) g.emplace_back(n, r);
    return g;
  }

  std::optional<json> generate(const SuiteContext<S>& ctx, Rng& rng, long sample) const override {
    const int r = ctx.cfg.rank;
    const std::size_t r2 = static_cast<std::size_t>(r / 2), r1 = static_cast<std::size_t>(r) - r2;
    BundleForm<S> theta = random_invariant_ym_curvature(ctx.model, r, rng, false);
    SecondForm<S> a = random_second_form<S>(ctx.N(), r1, r2, rng);
    if (sample % 10 == 0)
      for (auto& m : a.A) m = CMatrix<S>(r2, r1);
    else if (is_zero(a))
      return std::nullopt;
    return json{{"rank", r},
                {"theta", bundle_to_json(theta, r, r)},
                {"A", second_form_to_json(a)},
                {"L", structure_to_json(random_induced_structure<S>(rng))}};
  }

  Evaluation<S> evaluate(const SuiteContext<S>& ctx, const json& inst) const override {
    Evaluation<S> ev;
    const auto& M = ctx.model;
    const auto& kd = ctx.kd;
    const double tol = ctx.tol;
    const int N = ctx.N();
    const auto r = inst.at("rank").get<std::size_t>();
    const BundleForm<S> theta = bundle_from_json<S>(inst.at("theta"));
    const SecondForm<S> a = second_form_from_json<S>(inst.at("A"));
    const InducedStructure<S> L = structure_from_json<S>(inst.at("L"));
    const Complex<S> i = Complex<S>::i();
    const auto I = InducedStructure<S>::I();

    const BundleForm<S> tp = subbundle_curvature(theta, a);
    const BundleForm<S> res = restrict_to_sub(theta, a.sub_rank);
    const BundleForm<S> aa = a_wedge_aperp(a);
    ev.expect(near(tp + aa, res, tol), "theta_prime_identity");
    ev.expect(near(trace_form(tp) + trace_form(aa), trace_form(res), tol), "theta_prime_trace_identity");
    if (is_zero(a)) ev.expect(near(tp, res, tol), "A_zero_restriction");

    const Form<S> gram_form = i * trace_form(aa);
    CMatrix<S> G(N, N);
    for (int k = 0; k < N; ++k)
      for (int l = 0; l < N; ++l) G(k, l) = trace_of_product(a.A[k], a.A[l].adjoint());
    ev.expect(near(hermitian_11(gram_form), G, tol), "gram_matrix");
    ev.expect(is_positive_11(gram_form, tol), "gram_positive", "sqrt(-1) Tr(A ^ A_perp) is not positive");

    const DegreeIntegrand<S> degI(kd, I);
    const Form<S> minus_tr = i * (-trace_form(tp));
    const S d = degI(minus_tr, tol);
    const double scale = std::max(1.0, max_abs_coeff(minus_tr));
    ev.expect(detail::nonneg(d, tol, scale), "degree_nonnegative",
              "degree integrand of -Tr Theta' is " + ScalarTraits<S>::to_string(d));
    const bool d_zero = ScalarTraits<S>::near_zero(d, tol, scale);
    ev.expect(d_zero == is_zero(a), "degree_zero_iff_A_zero");
    ev.expect(ScalarTraits<S>::near_zero(degI(i * trace_form(res), tol), tol, scale), "invariant_part_degree_zero");

    const ChernIntegrands<S> ch = chern_integrands(theta, r);
    ev.expect(is_invariant(M, ch.c1_density, tol), "c1_invariant");
    ev.expect(near_zero(lambda2(kd, ch.c1_density, L), tol, max_abs_coeff(ch.c1_density)), "c1_lambda_zero");
    ev.expect(ScalarTraits<S>::near_zero(degI(ch.c1_density, tol), tol, max_abs_coeff(ch.c1_density)),
              "c1_degree_zero");
    const Complex<S> pI = kd.vol_coefficient(wedge(ch.disc_density, power(kd.omega_I(), N - 2)));
    const Complex<S> pJ = kd.vol_coefficient(wedge(ch.disc_density, power(kd.omega_J(), N - 2)));
    ev.expect(near(pI, pJ, tol), "disc_pairing_L_independent", "pairings " + to_string(pI) + " vs " + to_string(pJ));
    return ev;
  }

  void finalize(const SuiteContext<S>&, const std::vector<SampleRecord<S>>&, VerificationReport& rep) const override {
    const ChernIntegrands<S> ch;
    rep.constants["c1_normalization"] = Constant{std::nullopt, ch.c1_normalization};
    rep.constants["disc_normalization"] = Constant{std::nullopt, ch.disc_normalization};
  }
};

// ---------------------------------------------------------------- hodge_riemann

template <class S>
class HodgeRiemannSuite : public Suite<S> {
 public:
  std::string name() const override { return "hodge_riemann"; }
  std::string description() const override { return "Tr(Theta^Theta) ^ omega^{N-2} = c |Theta|^2 Vol with one c > 0"; }

  std::vector<std::pair<int, int>> grid() const override {
    std::vector<std::pair<int, int>> g;
    for (int n : {1, 2, 3})
      for (int r : {2, 3, 4}) g.emplace_back(n, r);
    return g;
  }

  std::optional<json> generate(const SuiteContext<S>& ctx, Rng& rng, long) const override {
    const int r = ctx.cfg.rank;
    BundleForm<S> theta = random_invariant_ym_curvature(ctx.model, r, rng, true);
    if (theta.is_zero()) return std::nullopt;
    return json{{"rank", r}, {"theta", bundle_to_json(theta, r, r)}};
  }

  Evaluation<S> evaluate(const SuiteContext<S>& ctx, const json& inst) const override {
    Evaluation<S> ev;
    const auto r = inst.at("rank").get<std::size_t>();
    const BundleForm<S> theta = bundle_from_json<S>(inst.at("theta"));
    const auto hr = hodge_riemann_check(ctx.kd, theta, r, ctx.tol);
    if (!hr) {
      ev.degenerate = true;
      return ev;
    }
    ev.measures["ratio"] = hr->ratio;
    ev.expect(detail::positive(hr->ratio, ctx.tol), "ratio_positive",
              "ratio = " + ScalarTraits<S>::to_string(hr->ratio));
    return ev;
  }

  void finalize(const SuiteContext<S>& ctx, const std::vector<SampleRecord<S>>& recs,
                VerificationReport& rep) const override {
    const long N = ctx.N();
    const S ref = S(S(1) / S(4 * (N * N - N)));
    rep.constants["reference_hodge_riemann_constant"] = detail::make_constant(ref);
    if (auto ratio = this->check_constant(ctx, recs, "ratio", "ratio_constant", rep)) {
      rep.constants["hodge_riemann_ratio"] = detail::make_constant(*ratio);
      rep.constants["hodge_riemann_convention_factor"] = detail::make_constant(S(*ratio / ref));
    }
  }
};

// ---------------------------------------------------------------- conventions

template <class S>
class ConventionsSuite : public Suite<S> {
 public:
  std::string name() const override { return "conventions"; }
  std::string description() const override {
    return "quaternion relations, covector dictionary, Kaehler forms, action properties, Killing-form signs";
  }

  std::optional<json> generate(const SuiteContext<S>& ctx, Rng& rng, long) const override {
    const int N = ctx.N();
    CMatrix<S> A(3, 3);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) A(a, b) = random_complex<S>(rng);
    return json{{"g", quaternion_to_json(random_unit_quaternion<S>(rng).quat())},
                {"h", quaternion_to_json(random_unit_quaternion<S>(rng).quat())},
                {"L", structure_to_json(random_induced_structure<S>(rng))},
                {"f", form_to_json(random_form<S>(N, 2, rng))},
                {"f1", form_to_json(random_form<S>(N, 1, rng))},
                {"A", matrix_to_json(A)}};
  }

  Evaluation<S> evaluate(const SuiteContext<S>& ctx, const json& inst) const override {
    Evaluation<S> ev;
    const auto& M = ctx.model;
    const auto& kd = ctx.kd;
    const double tol = ctx.tol;
    const int N = ctx.N();
    using Q = Quaternion<S>;
    const UnitQuaternion<S> g(quaternion_from_json<S>(inst.at("g")), 1e-9);
    const UnitQuaternion<S> h(quaternion_from_json<S>(inst.at("h")), 1e-9);
    const InducedStructure<S> L = structure_from_json<S>(inst.at("L"));
    const Form<S> f = form_from_json<S>(inst.at("f"));
    const Form<S> f1 = form_from_json<S>(inst.at("f1"));
    const CMatrix<S> A = matrix_from_json<S>(inst.at("A"));
    const Complex<S> i = Complex<S>::i();
    const auto Is = InducedStructure<S>::I(), Js = InducedStructure<S>::J(), Ks = InducedStructure<S>::K();

    ev.expect(Q::i() * Q::i() == -Q::one() && Q::j() * Q::j() == -Q::one() && Q::k() * Q::k() == -Q::one() &&
                  Q::i() * Q::j() == Q::k() && Q::j() * Q::i() == -Q::k(),
              "quaternion_relations");
    const CMatrix<S> one = CMatrix<S>::identity(M.dim());
    ev.expect(near(M.I() * M.I(), -one, tol), "covector_I_squared", "I^2 != -1 on covectors");
    ev.expect(near(M.J() * M.J(), -one, tol), "covector_J_squared", "J^2 != -1 on covectors");
    ev.expect(near(M.K() * M.K(), -one, tol), "covector_K_squared", "K^2 != -1 on covectors");
    ev.expect(near(M.J() * M.I(), -M.K(), tol), "covector_anticommute", "JI != -K on covectors");
    ev.expect(near(M.rho((g.quat() * h.quat())), M.rho(g.quat()) * M.rho(h.quat()), tol), "action_homomorphism");
    for (int a = 0; 2 * a + 1 < N; ++a) {
      const Form<S> lhs = M.act_J(wedge(z<S>(N, 2 * a), zbar<S>(N, 2 * a)));
      ev.expect(near(lhs, -wedge(z<S>(N, 2 * a + 1), zbar<S>(N, 2 * a + 1)), tol), "J_z_zbar",
                "J(z^zbar) = " + to_string(lhs));
    }
    const RealModel<S>& R = kd.real_model();
    ev.expect(near(R.pullback(g), M.rho(g.quat()), tol) && near(R.pullback(Is.as_unit()), M.I(), tol) &&
                  near(R.pullback(Js.as_unit()), M.J(), tol) && near(R.pullback(Ks.as_unit()), M.K(), tol),
              "real_model_dictionary", "covector dictionary differs from the pullback action on H^n");

    const S tr_aa = trace_of_product(A, A.adjoint()).re;
    ev.expect(detail::nonneg(tr_aa, tol) && (A.is_zero() || detail::positive(tr_aa, tol)), "killing_tr_AAdag");
    const CMatrix<S> X = A - A.adjoint();
    const Complex<S> tx = trace_of_product(X, X);
    ev.expect(detail::nonneg(S(-tx.re), tol, magnitude(tx)) && near_zero(Complex<S>(tx.im), tol, magnitude(tx)),
              "killing_negative", "Tr(X^2) = " + to_string(tx) + " for anti-Hermitian X");

    // frame-dependent checks; an inconsistent dictionary throws while building adapted frames
    try {
      Form<S> std_omega(N), std_Omega(N);
      for (int k = 0; k < N; ++k) std_omega += i * wedge(z<S>(N, k), zbar<S>(N, k));
      for (int a = 0; 2 * a + 1 < N; ++a) std_Omega += Complex<S>(2) * wedge(z<S>(N, 2 * a), z<S>(N, 2 * a + 1));
      ev.expect(near(kd.omega_I(), std_omega, tol), "omega_I_canonical");
      ev.expect(near(kd.Omega_I(), std_Omega, tol), "Omega_I_canonical");
      ev.expect(near(kd.omega(L),
                     Complex<S>(L.a()) * kd.omega_I() + Complex<S>(L.b()) * kd.omega_J() + Complex<S>(L.c()) * kd.omega_K(),
                     tol),
                "omega_linear_in_L");
      ev.expect(near(kd.omega(-Is), -kd.omega_I(), tol), "omega_antisymmetric_in_L");
      for (const auto& S_ : {Is, Js, Ks, L}) {
        const Form<S> w = kd.omega(S_);
        ev.expect(is_real(w, tol) && is_of_type(M, w, S_, 1, 1, tol), "omega_real_11", "omega_L for L = " + S_.str());
      }
      ev.expect(is_of_type(M, kd.Omega_I(), Is, 2, 0, tol), "Omega_I_type");
      ev.expect(is_of_type(M, kd.Omega_K(), Ks, 2, 0, tol), "Omega_K_type");
      ev.expect(near(M.act(g, kd.omega_I()), kd.omega(conjugate_structure(g, Is)), tol) &&
                    near(M.act(g, kd.omega_J()), kd.omega(conjugate_structure(g, Js)), tol) &&
                    near(M.act(g, kd.omega_K()), kd.omega(conjugate_structure(g, Ks)), tol),
                "omega_equivariance");
      const UnitQuaternion<S> rot = rotation_K_to_I<S>();
      ev.expect(conjugate_structure(rot, Ks) == Is && conjugate_structure(rot, Is) == Js, "rotation_K_to_I");

      const UnitQuaternion<S> gh(g.quat() * h.quat(), 1e-6);
      const InducedStructure<S> lhs = conjugate_structure(gh, L);
      const InducedStructure<S> rhs = conjugate_structure(g, conjugate_structure(h, L));
      ev.expect(near(lhs.quat(), rhs.quat(), tol), "conjugation_composition");
      {
        auto v = [&](const InducedStructure<S>& x) { return conjugate_structure(g, x).quat(); };
        const Q a = v(Is), b = v(Js), c = v(Ks);
        // det of the image basis = a . (b x c)
        const S d = a.x * (b.y * c.z - b.z * c.y) - a.y * (b.x * c.z - b.z * c.x) + a.z * (b.x * c.y - b.y * c.x);
        const InducedStructure<S> gl = conjugate_structure(g, L);
        ev.expect(ScalarTraits<S>::near(d, S(1), tol) &&
                      ScalarTraits<S>::near(S(gl.a() * gl.a() + gl.b() * gl.b() + gl.c() * gl.c()), S(1), tol),
                  "conjugation_orthogonal");
      }

      ev.expect(near(M.act(g, wedge(f, f1)), wedge(M.act(g, f), M.act(g, f1)), tol), "action_multiplicative");
      ev.expect(near(wedge(f, f1), wedge(f1, f), tol), "wedge_graded_commutative");
      ev.expect(near(wedge(f1, f1), Form<S>(N), tol), "wedge_alternating");
      ev.expect(near(M.act_I(M.act_J(f)), M.act_J(M.act_I(f)), tol), "IJ_commute_on_2forms");
      ev.expect(near(conj(conj(f)), f, tol), "conj_involution");
      const Complex<S> ipow[4] = {Complex<S>(1), i, Complex<S>(-1), -i};
      const auto parts = hodge_type_decompose(M, f, L);
      const auto cparts = hodge_type_decompose(M, conj(f), L);
      Form<S> sum(N);
      for (const auto& [pq, part] : parts) {
        sum += part;
        const int e = ((pq.first - pq.second) % 4 + 4) % 4;
        ev.expect(near(M.act(L, part), ipow[e] * part, tol), "type_eigenvalue",
                  "L acts on the (" + std::to_string(pq.first) + "," + std::to_string(pq.second) + ") part wrongly");
        auto it = cparts.find({pq.second, pq.first});
        ev.expect(it != cparts.end() && near(it->second, conj(part), tol), "conj_intertwines_types");
      }
      ev.expect(near(sum, f, tol), "decomposition_sums");
      ev.expect(near(M.act(g, kd.vol()), kd.vol(), tol), "vol_invariant");
    } catch (const std::exception& e) {
      ev.expect(false, "exception", e.what());
    }
    return ev;
  }
};

// ---------------------------------------------------------------- registry and runner

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"lemma26", "lemma27", "lemma52", "lemma72",    "lemma74",
                                              "lemma92", "sec9",    "hodge_riemann", "conventions"};
  return names;
}

template <class S>
std::unique_ptr<Suite<S>> make_suite(const std::string& name) {
  if (name == "lemma26") return std::make_unique<Lemma26Suite<S>>();
  if (name == "lemma27") return std::make_unique<Lemma27Suite<S>>();
  if (name == "lemma52") return std::make_unique<Lemma52Suite<S>>();
  if (name == "lemma72") return std::make_unique<Lemma72Suite<S>>();
  if (name == "lemma74") return std::make_unique<Lemma74Suite<S>>();
  if (name == "lemma92") return std::make_unique<Lemma92Suite<S>>();
  if (name == "sec9") return std::make_unique<Sec9Suite<S>>();
  if (name == "hodge_riemann") return std::make_unique<HodgeRiemannSuite<S>>();
  if (name == "conventions") return std::make_unique<ConventionsSuite<S>>();
  throw ConfigError("unknown suite '" + name + "'");
}

inline void validate_config(const SuiteConfig& cfg) {
  if (cfg.n < 1 || cfg.n > 3) throw ConfigError("--n must be 1, 2 or 3 (quaternionic dimension)");
  if (cfg.rank < 1 || cfg.rank > 4) throw ConfigError("--rank must be in 1..4");
  if (cfg.samples < 1) throw ConfigError("--samples must be positive");
  if (cfg.backend != "exact" && cfg.backend != "float") throw ConfigError("--backend must be exact or float");
  if (!(cfg.tolerance > 0.0) || !(cfg.tolerance < 1.0)) throw ConfigError("--tolerance must be in (0, 1)");
  if (cfg.jobs < 0) throw ConfigError("--jobs must be >= 0");
}

inline void parallel_for(long count, int jobs, const std::function<void(long)>& body) {
  int workers = jobs > 0 ? jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = static_cast<int>(std::min<long>(workers, count));
  if (workers <= 1) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (long i = next++; i < count; i = next++) body(i);
    });
  for (auto& t : pool) t.join();
}

template <class S>
SampleRecord<S> run_sample(const Suite<S>& suite, const SuiteContext<S>& ctx, long index) {
  using Status = typename SampleRecord<S>::Status;
  SampleRecord<S> rec;
  const std::uint64_t stream = detail::fnv1a(suite.name() + ":" + std::to_string(ctx.cfg.n) + ":" +
                                             std::to_string(ctx.cfg.rank));
  for (int attempt = 0; attempt < kMaxDegenerateRetries; ++attempt) {
    Rng rng = derive_rng(ctx.cfg.seed, stream, static_cast<std::uint64_t>(index) * 64 + attempt);
    std::optional<json> inst;
    try {
      inst = suite.generate(ctx, rng, index);
    } catch (const std::exception& e) {
      rec.status = Status::fail;
      rec.failures.push_back(Failure{index, "exception", std::string("generate: ") + e.what(), json{{"instance", nullptr}}});
      return rec;
    }
    if (!inst) {
      ++rec.degenerate_attempts;
      continue;
    }
    Evaluation<S> ev;
    try {
      ev = suite.evaluate(ctx, *inst);
    } catch (const std::exception& e) {
      ev.failures.push_back({"exception", e.what()});
    }
    if (ev.degenerate && ev.failures.empty()) {
      ++rec.degenerate_attempts;
      continue;
    }
    rec.instance = *inst;
    rec.measures = std::move(ev.measures);
    for (const auto& f : ev.failures) rec.failures.push_back(Failure{index, f.check, f.message, json{{"instance", *inst}}});
    rec.status = rec.failures.empty() ? Status::pass : Status::fail;
    return rec;
  }
  rec.status = Status::degenerate;
  return rec;
}

template <class S>
VerificationReport run_suite_backend(const SuiteConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  validate_config(cfg);
  auto suite = make_suite<S>(cfg.suite);
  suite->validate(cfg);
  SuiteContext<S> ctx(cfg);
  suite->prepare(ctx);

  std::vector<SampleRecord<S>> recs(static_cast<std::size_t>(cfg.samples));
  parallel_for(cfg.samples, cfg.jobs, [&](long i) { recs[static_cast<std::size_t>(i)] = run_sample(*suite, ctx, i); });

  VerificationReport rep;
  rep.suite = cfg.suite;
  rep.config = cfg;
  using Status = typename SampleRecord<S>::Status;
  for (const auto& r : recs) {
    rep.degenerate += r.degenerate_attempts;
    if (r.status == Status::pass) ++rep.pass;
    if (r.status == Status::fail) ++rep.fail;
    for (const auto& f : r.failures) rep.failures.push_back(f);
  }
  suite->finalize(ctx, recs, rep);
  if (rep.failures.size() > kMaxStoredFailures) {
    rep.failures_truncated = static_cast<long>(rep.failures.size() - kMaxStoredFailures);
    rep.failures.resize(kMaxStoredFailures);
  }
  rep.passed = rep.failures.empty();
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

/// Run one suite. Configuration errors are thrown as ConfigError.
inline VerificationReport run_suite(const SuiteConfig& cfg) {
  validate_config(cfg);
  if (cfg.backend == "exact") return run_suite_backend<Exact>(cfg);
  return run_suite_backend<Float>(cfg);
}

/// Every suite over its (n, rank) grid. A suite that rejects its configuration
/// is recorded as a failed report and the run continues.
inline SummaryReport run_all(const SuiteConfig& base) {
  const auto t0 = std::chrono::steady_clock::now();
  SummaryReport s;
  s.base = base;
  s.passed = true;
  for (const auto& name : suite_names()) {
    auto grid = make_suite<Exact>(name)->grid();
    for (const auto& [n, r] : grid) {
      SuiteConfig cfg = base;
      cfg.suite = name;
      cfg.n = n;
      if (r > 0) cfg.rank = r;
      VerificationReport rep;
      try {
        rep = run_suite(cfg);
      } catch (const ConfigError& e) {
        rep.suite = name;
        rep.config = cfg;
        rep.error = e.what();
        rep.passed = false;
      }
      s.passed = s.passed && rep.passed;
      s.reports.push_back(std::move(rep));
    }
  }
  s.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

struct ReplayResult {
  bool reproduced = false;
  std::string detail;
};

template <class S>
ReplayResult replay_backend(const SuiteConfig& cfg, const Failure& f) {
  auto suite = make_suite<S>(cfg.suite);
  SuiteContext<S> ctx(cfg);
  suite->prepare(ctx);
  if (!f.data.contains("instance") || f.data.at("instance").is_null())
    return {false, "no serialized instance for this failure"};
  Evaluation<S> ev;
  try {
    ev = suite->evaluate(ctx, f.data.at("instance"));
  } catch (const std::exception& e) {
    ev.failures.push_back({"exception", e.what()});
  }
  if (f.data.contains("measure")) {
    const std::string key = f.data.at("measure").get<std::string>();
    const S ref = scalar_from_json<S>(f.data.at("reference"));
    auto it = ev.measures.find(key);
    if (it == ev.measures.end()) return {false, "measure " + key + " not produced"};
    const bool differs = !detail::same_value(it->second, ref, cfg.tolerance);
    return {differs, key + " = " + ScalarTraits<S>::to_string(it->second) + ", reference " +
                         ScalarTraits<S>::to_string(ref)};
  }
  for (const auto& cf : ev.failures)
    if (cf.check == f.check) return {true, cf.message};
  return {false, "check " + f.check + " passes on the recorded instance"};
}

/// Re-evaluate a recorded counterexample under the report's configuration.
inline ReplayResult replay_failure(const SuiteConfig& cfg, const Failure& f) {
  validate_config(cfg);
  if (cfg.backend == "exact") return replay_backend<Exact>(cfg, f);
  return replay_backend<Float>(cfg, f);
}

}  // namespace hyperfiber
