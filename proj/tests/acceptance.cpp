// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hyperfiber/suites.hpp"

using namespace hyperfiber;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [" << what << "]";
    }
  }
};

SuiteConfig config(const std::string& suite, int n, long samples, int rank = 2, std::uint64_t seed = 20240601) {
  SuiteConfig c;
  c.suite = suite;
  c.n = n;
  c.rank = rank;
  c.samples = samples;
  c.seed = seed;
  c.jobs = 0;
  return c;
}

VerificationReport run(const SuiteConfig& cfg, double& seconds) {
  VerificationReport r = run_suite(cfg);
  seconds += r.wall_time_s;
  return r;
}

std::string where(const VerificationReport& r) {
  std::string s = r.suite + " n=" + std::to_string(r.config.n) + " r=" + std::to_string(r.config.rank);
  if (!r.failures.empty()) s += " first failure: " + r.failures.front().check + ": " + r.failures.front().message;
  return s;
}

std::optional<std::string> exact_constant(const VerificationReport& r, const std::string& key) {
  auto it = r.constants.find(key);
  if (it == r.constants.end()) return std::nullopt;
  return it->second.exact;
}

bool has_check(const VerificationReport& r, const std::string& prefix) {
  for (const auto& f : r.failures)
    if (f.check.rfind(prefix, 0) == 0) return true;
  return false;
}

void criterion1(Outcome& o) {
  double exact_s = 0, float_s = 0;
  for (int n = 1; n <= 3; ++n) {
    auto r = run(config("lemma26", n, 500), exact_s);
    o.require(r.passed && r.pass == 500, where(r));
    o.require(exact_constant(r, "max_abs_lambda") == std::optional<std::string>("0"), "exact Lambda not identically 0");
    auto fc = config("lemma26", n, 500);
    fc.backend = "float";
    auto rf = run(fc, float_s);
    o.require(rf.passed && rf.pass == 500, where(rf));
    o.require(rf.constants.at("max_abs_lambda").value <= 1e-9, "float |Lambda| > 1e-9");
  }
  o.require(exact_s <= 30.0, "exact runtime over 30 s");
  o.detail << " exact " << exact_s << "s, float " << float_s << "s";
}

void criterion2_3(Outcome& o2, Outcome& o3) {
  double secs = 0;
  for (int n : {2, 3})
    for (int r : {2, 3, 4}) {
      auto rep = run(config("lemma52", n, 200, r), secs);
      o2.require(rep.pass == 200 && rep.degenerate == 0, where(rep));
      for (const char* c : {"codim1_positive", "sum_Akk_zero", "Akk_partner", "generator_", "r2_invariant",
                            "basis_bridge", "exception"})
        o2.require(!has_check(rep, c), std::string(c) + " at " + where(rep));
      o3.require(exact_constant(rep, "b_formula_max_discrepancy_norm2") == std::optional<std::string>("0"),
                 "B discrepancy at " + where(rep));
      for (const char* c : {"B_", "C_ii"}) o3.require(!has_check(rep, c), std::string(c) + " at " + where(rep));
      o3.require(rep.passed, "suite red at " + where(rep));
    }
  o2.require(secs <= 300.0, "runtime over 5 min");
  o2.detail << " " << secs << "s";
  o3.detail << " discrepancy constant 0 in all 6 configurations";
}

void criterion4(Outcome& o) {
  double secs = 0;
  for (int n = 1; n <= 3; ++n) {
    auto r = run(config("lemma72", n, 500), secs);
    o.require(r.passed && r.pass == 500, where(r));
  }
  o.detail << " " << secs << "s";
}

void criterion5(Outcome& o) {
  double secs = 0;
  const char* expected[] = {"1", nullptr, nullptr};
  for (int n = 1; n <= 3; ++n) {
    auto a = run(config("lemma74", n, 200), secs);
    auto b = run(config("lemma74", n, 200, 2, 7), secs);
    const std::string key = "c_" + std::to_string(n);
    auto ca = exact_constant(a, key), cb = exact_constant(b, key);
    o.require(a.passed && b.passed, where(a.passed ? b : a));
    o.require(ca.has_value() && ca == cb, key + " unstable across seeds");
    o.require(a.constants.count(key) && a.constants.at(key).value > 0, key + " not positive");
    if (expected[n - 1]) o.require(ca == std::optional<std::string>(expected[n - 1]), key + " != 1");
    o.require(exact_constant(a, "kappa") == ca, "degree constant differs from " + key);
    o.detail << " " << key << "=" << ca.value_or("?");
  }
}

void criterion6(Outcome& o) {
  double secs = 0;
  for (int n = 1; n <= 3; ++n) {
    auto r = run(config("lemma92", n, 500), secs);
    o.require(r.passed && r.pass == 500, where(r));
  }
  o.detail << " " << secs << "s";
}

void criterion7(Outcome& o) {
  double secs = 0;
  for (int n = 1; n <= 3; ++n) {
    auto r = run(config("sec9", n, 200, 3), secs);
    o.require(r.passed && r.pass == 200, where(r));
  }
  o.detail << " " << secs << "s";
}

void criterion8(Outcome& o) {
  double secs = 0;
  for (int n = 1; n <= 3; ++n)
    for (int r : {2, 3}) {
      auto rep = run(config("hodge_riemann", n, 100, r), secs);
      o.require(rep.passed && rep.pass == 100, where(rep));
      auto ratio = exact_constant(rep, "hodge_riemann_ratio");
      o.require(ratio.has_value() && rep.constants.at("hodge_riemann_ratio").value > 0, "ratio missing or <= 0");
      if (r == 2)
        o.detail << " N=" << 2 * n << ": ratio " << ratio.value_or("?") << " vs 1/(4(N^2-N)) "
                 << exact_constant(rep, "reference_hodge_riemann_constant").value_or("?") << ", factor "
                 << exact_constant(rep, "hodge_riemann_convention_factor").value_or("?") << ";";
    }
}

void criterion9(Outcome& o) {
  bool any_red = false, replayed = true;
  long failures = 0;
  for (const char* s : {"lemma52", "lemma72", "conventions"}) {
    auto c = config(s, 2, 10, 3);
    c.fault_inject = true;
    auto rep = report_from_json(json::parse(report_to_json(run_suite(c)).dump()));
    if (rep.passed) continue;
    any_red = true;
    for (const auto& f : rep.failures) {
      ++failures;
      if (!f.data.contains("instance") || f.data.at("instance").is_null()) replayed = false;
      if (!replay_failure(rep.config, f).reproduced) replayed = false;
    }
  }
  o.require(any_red, "no suite detected the fault");
  o.require(replayed, "a counterexample did not replay");
  o.detail << " " << failures << " stored counterexamples replayed";
}

}  // namespace

int main() {
  std::cout.precision(3);
  std::vector<std::pair<std::string, Outcome>> results(9);
  const char* names[] = {"invariant 2-forms have Lambda_L = 0",
                         "r2 ^ omega^{N-3} positive, sum A_kk = 0, A_kk = -A_partner",
                         "B direct expansion = formula, C_ii identities and C_ii >= 0",
                         "weight split = K-Hodge split, K20 roundtrip, real structure",
                         "E-form constants and degree identity",
                         "eta_+ positive and nonzero, -K eta positive",
                         "sub-bundle curvature identity and degree positivity",
                         "Hodge-Riemann ratio constant and positive",
                         "fault injection detected with replayable counterexamples"};
  for (int k = 0; k < 9; ++k) results[k].first = names[k];
  auto guarded = [](Outcome& o, const std::function<void()>& f) {
    try {
      f();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
  };
  guarded(results[0].second, [&] { criterion1(results[0].second); });
  guarded(results[1].second, [&] { criterion2_3(results[1].second, results[2].second); });
  guarded(results[3].second, [&] { criterion4(results[3].second); });
  guarded(results[4].second, [&] { criterion5(results[4].second); });
  guarded(results[5].second, [&] { criterion6(results[5].second); });
  guarded(results[6].second, [&] { criterion7(results[6].second); });
  guarded(results[7].second, [&] { criterion8(results[7].second); });
  guarded(results[8].second, [&] { criterion9(results[8].second); });

  bool all = true;
  for (int k = 0; k < 9; ++k) {
    const auto& [name, o] = results[k];
    all = all && o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << k + 1 << ": " << name << ";" << o.detail.str() << "\n";
  }
  return all ? 0 : 1;
}
