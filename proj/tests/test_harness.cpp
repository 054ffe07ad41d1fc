#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "hyperfiber/suites.hpp"

using namespace hyperfiber;

namespace {

SuiteConfig config(const std::string& suite, int n, long samples, int rank = 2) {
  SuiteConfig c;
  c.suite = suite;
  c.n = n;
  c.rank = rank;
  c.samples = samples;
  c.seed = 12345;
  c.jobs = 1;
  return c;
}

json without_time(json j) {
  j.erase("wall_time_s");
  return j;
}

}  // namespace

TEST(Json, FormRoundTrip) {
  Rng rng = derive_rng(1, 2, 3);
  auto f = random_form<Exact>(4, 2, rng);
  EXPECT_EQ(form_from_json<Exact>(form_to_json(f)), f);
  auto g = random_form<Float>(4, 3, rng);
  EXPECT_EQ(form_from_json<Float>(json::parse(form_to_json(g).dump())), g);
}

TEST(Json, RejectsMalformedForms) {
  json bad{{"N", 2}, {"terms", json::array({json::array({json::array({1, 0}), "1", "0"})})}};
  EXPECT_THROW(form_from_json<Exact>(bad), std::invalid_argument);
  json out_of_range{{"N", 1}, {"terms", json::array({json::array({json::array({0, 3}), "1", "0"})})}};
  EXPECT_THROW(form_from_json<Exact>(out_of_range), std::invalid_argument);
}

TEST(Json, BundleAndSecondFormRoundTrip) {
  FiberModel<Exact> M(1);
  Rng rng = derive_rng(5, 5, 5);
  auto theta = random_invariant_ym_curvature(M, 3, rng);
  EXPECT_EQ(bundle_from_json<Exact>(bundle_to_json(theta, 3, 3)), theta);
  auto a = random_second_form<Exact>(2, 2, 1, rng);
  auto b = second_form_from_json<Exact>(second_form_to_json(a));
  ASSERT_EQ(b.A.size(), a.A.size());
  for (std::size_t k = 0; k < a.A.size(); ++k) EXPECT_EQ(b.A[k], a.A[k]);
}

TEST(Report, RoundTripsLosslessly) {
  auto cfg = config("hodge_riemann", 2, 5, 3);
  auto rep = run_suite(cfg);
  auto back = report_from_json(json::parse(report_to_json(rep).dump()));
  EXPECT_EQ(back, rep);
  EXPECT_EQ(back.constants.at("hodge_riemann_ratio").exact, std::optional<std::string>("2"));
}

TEST(Report, RejectsOtherSchemaVersion) {
  auto j = report_to_json(run_suite(config("lemma92", 1, 2)));
  j["schema_version"] = 99;
  EXPECT_THROW(report_from_json(j), ConfigError);
}

TEST(Runner, DeterministicAcrossWorkerCounts) {
  for (const char* s : {"lemma52", "sec9", "lemma74"}) {
    auto a = config(s, 2, 12, 3);
    auto b = a;
    b.jobs = 4;
    EXPECT_EQ(without_time(report_to_json(run_suite(a))), without_time(report_to_json(run_suite(b)))) << s;
  }
}

TEST(Runner, SeedChangesSamples) {
  auto a = config("lemma26", 1, 3);
  a.fault_inject = true;
  auto b = a;
  b.seed = 999;
  EXPECT_NE(report_to_json(run_suite(a)).at("failures"), report_to_json(run_suite(b)).at("failures"));
}

TEST(Runner, ConfigErrors) {
  EXPECT_THROW(run_suite(config("lemma52", 1, 1)), ConfigError);
  EXPECT_THROW(run_suite(config("no_such_suite", 1, 1)), ConfigError);
  EXPECT_THROW(run_suite(config("lemma26", 4, 1)), ConfigError);
  EXPECT_THROW(run_suite(config("lemma26", 1, 0)), ConfigError);
  EXPECT_THROW(run_suite(config("sec9", 1, 1, 1)), ConfigError);
  auto c = config("lemma26", 1, 1);
  c.backend = "quad";
  EXPECT_THROW(run_suite(c), ConfigError);
}

TEST(Runner, Lemma74SmallestCase) {
  auto rep = run_suite(config("lemma74", 1, 10));
  EXPECT_TRUE(rep.passed);
  EXPECT_EQ(rep.constants.at("c_1").exact, std::optional<std::string>("1"));
}

TEST(Runner, RankOneCurvatureIsDegenerate) {
  auto rep = run_suite(config("hodge_riemann", 1, 3, 1));
  EXPECT_TRUE(rep.passed);
  EXPECT_EQ(rep.pass, 0);
  EXPECT_EQ(rep.degenerate, 3 * kMaxDegenerateRetries);
}

TEST(Runner, FailuresAreTruncated) {
  auto c = config("conventions", 1, 10);
  c.fault_inject = true;
  auto rep = run_suite(c);
  EXPECT_FALSE(rep.passed);
  EXPECT_EQ(rep.failures.size(), kMaxStoredFailures);
  EXPECT_GT(rep.failures_truncated, 0);
}

TEST(Runner, FaultInjectionIsReplayable) {
  for (const char* s : {"lemma52", "lemma72", "conventions"}) {
    auto c = config(s, 2, 2);
    c.fault_inject = true;
    auto rep = report_from_json(json::parse(report_to_json(run_suite(c)).dump()));
    ASSERT_FALSE(rep.passed) << s;
    for (const auto& f : rep.failures) EXPECT_TRUE(replay_failure(rep.config, f).reproduced) << s << " " << f.check;
  }
}

TEST(Runner, ReplayOfPassingInstanceDoesNotReproduce) {
  auto c = config("conventions", 1, 1);
  c.fault_inject = true;
  auto rep = run_suite(c);
  ASSERT_FALSE(rep.failures.empty());
  auto clean = rep.config;
  clean.fault_inject = false;
  EXPECT_FALSE(replay_failure(clean, rep.failures.front()).reproduced);
}

TEST(Runner, FloatBackendPasses) {
  for (const char* s : {"lemma26", "lemma72", "lemma92", "conventions"}) {
    auto c = config(s, 2, 5);
    c.backend = "float";
    EXPECT_TRUE(run_suite(c).passed) << s;
  }
}

TEST(Report, WritesFile) {
  auto path = (std::filesystem::temp_directory_path() / "hyperfiber_report_test.json").string();
  auto rep = run_suite(config("lemma92", 1, 2));
  write_json_file(path, report_to_json(rep));
  EXPECT_EQ(report_from_json(read_json_file(path)), rep);
  std::remove(path.c_str());
  EXPECT_THROW(write_json_file("/nonexistent-dir/x.json", json::object()), ConfigError);
}
