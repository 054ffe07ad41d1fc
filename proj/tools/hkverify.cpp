#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include "hyperfiber/suites.hpp"

namespace hf = hyperfiber;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

void add_config_flags(CLI::App& cmd, hf::SuiteConfig& cfg, bool with_suite) {
  if (with_suite) cmd.add_option("--suite", cfg.suite, "suite name")->required();
  cmd.add_option("--n", cfg.n, "quaternionic dimension (1..3)");
  cmd.add_option("--rank", cfg.rank, "bundle rank (1..4)");
  cmd.add_option("--samples", cfg.samples, "non-degenerate samples per run");
  cmd.add_option("--seed", cfg.seed, "master seed");
  cmd.add_option("--backend", cfg.backend, "exact or float");
  cmd.add_option("--tolerance", cfg.tolerance, "float backend tolerance");
  cmd.add_option("--report", cfg.report_path, "write the JSON report here");
  cmd.add_flag("--fault-inject", cfg.fault_inject, "flip one sign in the J dictionary");
  cmd.add_option("--jobs", cfg.jobs, "worker threads (0: all cores)");
}

void check_writable(const std::string& path) {
  if (path.empty()) return;
  std::ofstream probe(path, std::ios::app);
  if (!probe) throw hf::ConfigError("unwritable report path: " + path);
}

std::string counts(const hf::VerificationReport& r) {
  return "pass=" + std::to_string(r.pass) + " fail=" + std::to_string(r.fail) +
         " degenerate=" + std::to_string(r.degenerate);
}

void print_report(const hf::VerificationReport& r) {
  std::cout << (r.passed ? "PASS " : "FAIL ") << r.suite << " n=" << r.config.n << " rank=" << r.config.rank
            << " backend=" << r.config.backend << " " << counts(r) << " (" << std::fixed << std::setprecision(2)
            << r.wall_time_s << "s)\n";
  if (r.error) std::cout << "  error: " << *r.error << "\n";
  for (const auto& [name, c] : r.constants)
    std::cout << "  " << name << " = " << (c.exact ? *c.exact : std::to_string(c.value)) << "\n";
  for (const auto& f : r.failures) std::cout << "  sample " << f.sample << " [" << f.check << "] " << f.message << "\n";
  if (r.failures_truncated) std::cout << "  ... " << r.failures_truncated << " more failures\n";
}

int cmd_verify(const hf::SuiteConfig& cfg) {
  check_writable(cfg.report_path);
  const hf::VerificationReport r = hf::run_suite(cfg);
  print_report(r);
  if (!cfg.report_path.empty()) hf::write_json_file(cfg.report_path, hf::report_to_json(r));
  return r.passed ? kExitPass : kExitFail;
}

int cmd_all(const hf::SuiteConfig& cfg) {
  check_writable(cfg.report_path);
  const hf::SummaryReport s = hf::run_all(cfg);
  for (const auto& r : s.reports) print_report(r);
  std::cout << (s.passed ? "ALL PASS" : "SOME FAILED") << " (" << std::fixed << std::setprecision(2) << s.wall_time_s
            << "s)\n";
  if (!cfg.report_path.empty()) hf::write_json_file(cfg.report_path, hf::summary_to_json(s));
  return s.passed ? kExitPass : kExitFail;
}

std::string constant_text(const hf::VerificationReport& r, const std::string& key) {
  auto it = r.constants.find(key);
  if (it == r.constants.end()) return "-";
  return it->second.exact ? *it->second.exact : std::to_string(it->second.value);
}

int cmd_constants(hf::SuiteConfig cfg) {
  check_writable(cfg.report_path);
  bool ok = true;
  hf::json out = hf::json::array();
  std::cout << std::left << std::setw(4) << "n" << std::setw(6) << "N" << std::setw(10) << "c_n" << std::setw(12)
            << "2^-(n-1)" << std::setw(10) << "kappa" << std::setw(12) << "HR ratio" << std::setw(14) << "1/(4(N^2-N))"
            << "HR factor\n";
  for (int n = 1; n <= 3; ++n) {
    hf::SuiteConfig e = cfg;
    e.suite = "lemma74";
    e.n = n;
    hf::SuiteConfig h = cfg;
    h.suite = "hodge_riemann";
    h.n = n;
    h.rank = 2;
    const auto re = hf::run_suite(e);
    const auto rh = hf::run_suite(h);
    ok = ok && re.passed && rh.passed;
    const std::string cn = "c_" + std::to_string(n);
    std::cout << std::left << std::setw(4) << n << std::setw(6) << 2 * n << std::setw(10) << constant_text(re, cn)
              << std::setw(12) << constant_text(re, "reference_two_pow_minus_n_minus_1") << std::setw(10)
              << constant_text(re, "kappa") << std::setw(12) << constant_text(rh, "hodge_riemann_ratio")
              << std::setw(14) << constant_text(rh, "reference_hodge_riemann_constant")
              << constant_text(rh, "hodge_riemann_convention_factor") << "\n";
    out.push_back(hf::report_to_json(re));
    out.push_back(hf::report_to_json(rh));
  }
  if (!cfg.report_path.empty())
    hf::write_json_file(cfg.report_path, hf::json{{"schema_version", hf::kReportSchemaVersion},
                                                  {"kind", "constants"},
                                                  {"reports", out}});
  return ok ? kExitPass : kExitFail;
}

int cmd_replay(const std::string& path) {
  const hf::json j = hf::read_json_file(path);
  std::vector<hf::VerificationReport> reports;
  try {
    if (j.contains("kind") && j.at("kind") != "report")
      for (const auto& r : j.at("reports")) reports.push_back(hf::report_from_json(r));
    else
      reports.push_back(hf::report_from_json(j));
  } catch (const hf::json::exception& e) {
    throw hf::ConfigError(std::string("malformed report: ") + e.what());
  }
  long total = 0, reproduced = 0;
  for (const auto& r : reports)
    for (const auto& f : r.failures) {
      ++total;
      const hf::ReplayResult rr = hf::replay_failure(r.config, f);
      reproduced += rr.reproduced ? 1 : 0;
      std::cout << (rr.reproduced ? "REPRODUCED " : "NOT REPRODUCED ") << r.suite << " n=" << r.config.n
                << " sample " << f.sample << " [" << f.check << "] " << rr.detail << "\n";
    }
  std::cout << reproduced << "/" << total << " failures reproduced\n";
  if (total == 0) std::cout << "report contains no failures\n";
  return reproduced == total ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hkverify: randomized verification of hyperkaehler fiber identities"};
  app.require_subcommand(1);
  hf::SuiteConfig vcfg, acfg, ccfg;
  ccfg.samples = 20;
  std::string replay_path;

  auto* verify = app.add_subcommand("verify", "run one suite");
  add_config_flags(*verify, vcfg, true);
  auto* all = app.add_subcommand("all", "run every suite over its (n, rank) grid");
  add_config_flags(*all, acfg, false);
  auto* constants = app.add_subcommand("constants", "print c_n and the measured ratios");
  add_config_flags(*constants, ccfg, false);
  auto* replay = app.add_subcommand("replay", "re-evaluate the counterexamples stored in a report");
  replay->add_option("report", replay_path, "report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*verify) return cmd_verify(vcfg);
    if (*all) return cmd_all(acfg);
    if (*constants) return cmd_constants(ccfg);
    if (*replay) return cmd_replay(replay_path);
  } catch (const hf::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
