#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hyperfiber/errors.hpp"
#include "hyperfiber/json_io.hpp"

namespace hyperfiber {

inline constexpr int kReportSchemaVersion = 1;

/// One verification run. `jobs` and `report_path` do not change results and
/// are not echoed into reports.
struct SuiteConfig {
  std::string suite = "conventions";
  int n = 2;
  int rank = 2;
  long samples = 100;
  std::uint64_t seed = 1;
  std::string backend = "exact";
  double tolerance = kDefaultTolerance;
  bool fault_inject = false;
  std::string report_path;
  int jobs = 0;  // 0: hardware concurrency

  friend bool operator==(const SuiteConfig& a, const SuiteConfig& b) {
    return a.suite == b.suite && a.n == b.n && a.rank == b.rank && a.samples == b.samples && a.seed == b.seed &&
           a.backend == b.backend && a.tolerance == b.tolerance && a.fault_inject == b.fault_inject;
  }
};

inline json config_to_json(const SuiteConfig& c) {
  return json{{"suite", c.suite},     {"n", c.n},
              {"rank", c.rank},       {"samples", c.samples},
              {"seed", c.seed},       {"backend", c.backend},
              {"tolerance", c.tolerance}, {"fault_inject", c.fault_inject}};
}

inline SuiteConfig config_from_json(const json& j) {
  SuiteConfig c;
  c.suite = j.at("suite").get<std::string>();
  c.n = j.at("n").get<int>();
  c.rank = j.at("rank").get<int>();
  c.samples = j.at("samples").get<long>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.backend = j.at("backend").get<std::string>();
  c.tolerance = j.at("tolerance").get<double>();
  c.fault_inject = j.at("fault_inject").get<bool>();
  return c;
}

/// Measured constant; `exact` holds the rational string when the backend is exact.
struct Constant {
  std::optional<std::string> exact;
  double value = 0;
  friend bool operator==(const Constant& a, const Constant& b) { return a.exact == b.exact && a.value == b.value; }
};

/// A replayable counterexample. `data` carries the serialized instance and,
/// for cross-sample checks, the reference value it was compared against.
struct Failure {
  long sample = -1;
  std::string check;
  std::string message;
  json data;
  friend bool operator==(const Failure& a, const Failure& b) {
    return a.sample == b.sample && a.check == b.check && a.message == b.message && a.data == b.data;
  }
};

struct VerificationReport {
  int schema_version = kReportSchemaVersion;
  std::string suite;
  SuiteConfig config;
  bool passed = false;
  long pass = 0;
  long fail = 0;
  long degenerate = 0;
  std::map<std::string, Constant> constants;
  std::vector<Failure> failures;
  long failures_truncated = 0;
  std::optional<std::string> error;  // configuration error for this suite, if any
  double wall_time_s = 0;

  friend bool operator==(const VerificationReport& a, const VerificationReport& b) {
    return a.schema_version == b.schema_version && a.suite == b.suite && a.config == b.config &&
           a.passed == b.passed && a.pass == b.pass && a.fail == b.fail && a.degenerate == b.degenerate &&
           a.constants == b.constants && a.failures == b.failures && a.failures_truncated == b.failures_truncated &&
           a.error == b.error && a.wall_time_s == b.wall_time_s;
  }
};

inline json report_to_json(const VerificationReport& r) {
  json constants = json::object();
  for (const auto& [name, c] : r.constants)
    constants[name] = json{{"exact", c.exact ? json(*c.exact) : json(nullptr)}, {"value", c.value}};
  json failures = json::array();
  for (const auto& f : r.failures)
    failures.push_back(json{{"sample", f.sample}, {"check", f.check}, {"message", f.message}, {"data", f.data}});
  json j{{"schema_version", r.schema_version},
         {"suite", r.suite},
         {"config", config_to_json(r.config)},
         {"passed", r.passed},
         {"counts", {{"pass", r.pass}, {"fail", r.fail}, {"degenerate", r.degenerate}}},
         {"constants", constants},
         {"failures", failures},
         {"failures_truncated", r.failures_truncated},
         {"error", r.error ? json(*r.error) : json(nullptr)},
         {"wall_time_s", r.wall_time_s}};
  return j;
}

inline VerificationReport report_from_json(const json& j) {
  VerificationReport r;
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version != kReportSchemaVersion)
    throw ConfigError("unsupported report schema version " + std::to_string(r.schema_version));
  r.suite = j.at("suite").get<std::string>();
  r.config = config_from_json(j.at("config"));
  r.passed = j.at("passed").get<bool>();
  r.pass = j.at("counts").at("pass").get<long>();
  r.fail = j.at("counts").at("fail").get<long>();
  r.degenerate = j.at("counts").at("degenerate").get<long>();
  for (const auto& [name, c] : j.at("constants").items()) {
    Constant k;
    if (!c.at("exact").is_null()) k.exact = c.at("exact").get<std::string>();
    k.value = c.at("value").get<double>();
    r.constants.emplace(name, k);
  }
  for (const auto& f : j.at("failures"))
    r.failures.push_back(Failure{f.at("sample").get<long>(), f.at("check").get<std::string>(),
                                 f.at("message").get<std::string>(), f.at("data")});
  r.failures_truncated = j.at("failures_truncated").get<long>();
  if (!j.at("error").is_null()) r.error = j.at("error").get<std::string>();
  r.wall_time_s = j.at("wall_time_s").get<double>();
  return r;
}

/// Aggregate of run_all.
struct SummaryReport {
  SuiteConfig base;
  bool passed = false;
  std::vector<VerificationReport> reports;
  double wall_time_s = 0;
};

inline json summary_to_json(const SummaryReport& s) {
  json reports = json::array();
  for (const auto& r : s.reports) reports.push_back(report_to_json(r));
  json base = config_to_json(s.base);
  base.erase("suite");
  base.erase("n");
  base.erase("rank");
  return json{{"schema_version", kReportSchemaVersion},
              {"kind", "summary"},
              {"config", base},
              {"passed", s.passed},
              {"reports", reports},
              {"wall_time_s", s.wall_time_s}};
}

/// Reports are written with a trailing newline and two-space indentation.
inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open report path for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw ConfigError("failed writing report: " + path);
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }
}

}  // namespace hyperfiber
