// steerkit: evaluate multipartite steering criteria from the command line.
//
// Exit status: 0 when the run completed (whatever the physical verdict),
// 1 on an internal error or a failed selftest, 2 on a usage or validation
// error. Reports go to stdout as JSON lines (default) or CSV.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "steerkit/report.hpp"
#include "steerkit/selftest.hpp"

namespace {

using namespace steerkit;

enum class Format { Json, Csv };

struct Globals {
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool json = false;
  bool csv = false;
  bool timing = false;
  unsigned threads = 0;
};

qubit::NoClickPolicy policy_from(const std::string& name, double guess) {
  if (name == "marginal-mean") return qubit::MarginalMean{};
  if (name == "constant-guess") return qubit::ConstantGuess{guess};
  throw std::invalid_argument("unknown no-click policy: " + name);
}

Record to_record(const PointResult& r) {
  return std::visit([](const auto& x) -> Record { return x; }, r);
}

void emit(const RunReport& report, Format format) {
  std::cout << (format == Format::Json ? to_json_lines(report) : to_csv(report));
  std::cout.flush();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multipartite EPR steering criteria for qubit and Gaussian states", "steerkit"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Seed for sampled quantities")->capture_default_str();
  auto* json_flag = app.add_flag("--json", g.json, "Emit JSON lines (default)");
  auto* csv_flag = app.add_flag("--csv", g.csv, "Emit CSV");
  json_flag->excludes(csv_flag);
  app.add_flag("--timing", g.timing, "Include wall time in the run header");
  app.add_option("--threads", g.threads, "Worker threads for sweeps (0 = hardware)")->capture_default_str();

  // ghz-qubit
  auto* qcmd = app.add_subcommand("ghz-qubit", "Steering of a noisy GHZ register");
  QubitGhzParams qp;
  std::string q_policy = "marginal-mean";
  double q_guess = 1.0;
  qcmd->add_option("--n", qp.n, "Number of qubits")->capture_default_str();
  qcmd->add_option("--noise-p", qp.noise_p, "Weight of GHZ against white noise")->capture_default_str();
  qcmd->add_option("--eta", qp.model.efficiency, "Detection efficiency of the steering group")->capture_default_str();
  qcmd->add_option("--policy", q_policy, "No-click policy: marginal-mean | constant-guess")->capture_default_str();
  qcmd->add_option("--guess", q_guess, "Reported value on no-click for constant-guess")->capture_default_str();
  qcmd->add_option("--criterion", qp.criterion, "two-obs | three-obs | result4")->capture_default_str();
  qcmd->add_option("--target", qp.target, "Steered site (default: last)");

  // ghz-cv
  auto* ccmd = app.add_subcommand("ghz-cv", "Steering of the three-mode CV GHZ state");
  CvGhzParams cp;
  ccmd->add_option("--r", cp.r, "Squeezing parameter")->capture_default_str();
  ccmd->add_option("--target", cp.target, "Steered mode")->capture_default_str();
  ccmd->add_option("--criterion", cp.criterion, "eq2 | eq6 | result4")->capture_default_str();

  // eavesdrop
  auto* ecmd = app.add_subcommand("eavesdrop", "Beamsplitter attack on modes 2 and 3 of the CV GHZ state");
  double e_r = 1.5;
  std::string e_grid;
  ecmd->add_option("--r", e_r, "Squeezing parameter")->capture_default_str();
  ecmd->add_option("--eta-grid", e_grid, "Transmissivity grid start:stop:step")->required();

  // threshold
  auto* tcmd = app.add_subcommand("threshold", "Bisect for the flip of a steering verdict");
  std::string t_scenario;
  std::string t_policy = "marginal-mean";
  double t_guess = 1.0;
  double t_tol = kThresholdTolerance;
  tcmd->add_option("--scenario", t_scenario, "three-obs-eta | two-obs-eta | cv-eq6-r | cv-result4-r")->required();
  tcmd->add_option("--policy", t_policy, "No-click policy for the qubit scenarios")->capture_default_str();
  tcmd->add_option("--guess", t_guess, "Reported value on no-click for constant-guess")->capture_default_str();
  tcmd->add_option("--tol", t_tol, "Final bracket width")->capture_default_str();

  // sweep
  auto* scmd = app.add_subcommand("sweep", "Run a declarative parameter sweep (CSV unless --json)");
  std::string s_config;
  scmd->add_option("--config", s_config, "Sweep description (JSON file)")->required();

  // secret-sharing
  auto* sscmd = app.add_subcommand("secret-sharing", "Collective steering and monogamy on the GHZ resource");
  std::string ss_backend = "qubit";
  int ss_n = 3;
  double ss_r = 1.0;
  sscmd->add_option("--backend", ss_backend, "qubit | cv")->capture_default_str();
  sscmd->add_option("--n", ss_n, "Number of parties")->capture_default_str();
  sscmd->add_option("--r", ss_r, "Squeezing parameter (cv)")->capture_default_str();

  auto* selfcmd = app.add_subcommand("selftest", "Check golden values; nonzero exit on any mismatch");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  g.seed_given = seed_opt->count() > 0;

  try {
    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    Format format = g.csv ? Format::Csv : Format::Json;
    report.parameters["seed"] = g.seed;

    if (qcmd->parsed()) {
      qp.model.no_click = policy_from(q_policy, q_guess);
      report.scenario = "ghz-qubit";
      report.parameters["n"] = static_cast<std::uint64_t>(std::max(qp.n, 0));
      report.parameters["noise_p"] = qp.noise_p;
      report.parameters["eta"] = qp.model.efficiency;
      report.parameters["policy"] = q_policy;
      if (q_policy == "constant-guess") report.parameters["guess"] = q_guess;
      report.parameters["criterion"] = qp.criterion;
      report.parameters["target"] = static_cast<std::uint64_t>(std::max(qp.target == 0 ? qp.n : qp.target, 0));
      report.records.push_back(to_record(run_qubit_ghz(qp)));
    } else if (ccmd->parsed()) {
      report.scenario = "ghz-cv";
      report.parameters["r"] = cp.r;
      report.parameters["target"] = static_cast<std::uint64_t>(std::max(cp.target, 0));
      report.parameters["criterion"] = cp.criterion;
      report.records.push_back(to_record(run_cv_ghz(cp)));
    } else if (ecmd->parsed()) {
      report.scenario = "eavesdrop";
      report.parameters["r"] = e_r;
      report.parameters["eta_grid"] = e_grid;
      const EavesdropSweep sweep = eavesdrop_sweep(e_r, parse_grid(e_grid));
      report.parameters["monotone"] = std::string(sweep.monotone ? "true" : "false");
      for (const auto& rec : sweep.records) report.records.push_back(rec);
    } else if (tcmd->parsed()) {
      report.scenario = "threshold";
      report.parameters["scenario"] = t_scenario;
      report.parameters["policy"] = t_policy;
      if (t_policy == "constant-guess") report.parameters["guess"] = t_guess;
      report.parameters["tol"] = t_tol;
      report.records.push_back(threshold_scenario(t_scenario, policy_from(t_policy, t_guess), t_tol));
    } else if (scmd->parsed()) {
      SweepConfig cfg = parse_sweep_config(read_file(s_config));
      if (g.seed_given) cfg.seed = g.seed;
      if (!g.json) format = Format::Csv;
      report.scenario = "sweep:" + cfg.scenario;
      report.parameters["seed"] = cfg.seed;
      report.parameters["backend"] = std::string(to_string(cfg.backend));
      report.parameters["parameter"] = cfg.parameter;
      report.parameters["criterion"] = cfg.criterion;
      report.parameters["policy"] = cfg.policy;
      report.parameters["shots"] = cfg.shots;
      for (const auto& [k, v] : cfg.fixed) report.parameters["fixed." + k] = v;
      for (auto& rec : run_sweep(cfg, g.threads)) report.records.push_back(std::move(rec));
    } else if (sscmd->parsed()) {
      report.scenario = "secret-sharing";
      report.parameters["backend"] = ss_backend;
      report.parameters["n"] = static_cast<std::uint64_t>(std::max(ss_n, 0));
      if (ss_backend == "cv") report.parameters["r"] = ss_r;
      report.records.push_back(secret_sharing_demo(backend_from_string(ss_backend), ss_n, ss_r));
    } else if (selfcmd->parsed()) {
      int failures = 0;
      for (const auto& c : run_selftest()) {
        std::printf("%s  %-45s expected %.12g got %.12g (tol %.1e)\n", c.passed ? "ok  " : "FAIL", c.name.c_str(),
                    c.expected, c.actual, c.tolerance);
        failures += c.passed ? 0 : 1;
      }
      std::printf("%d failure(s)\n", failures);
      return failures == 0 ? 0 : 1;
    }

    if (g.timing)
      report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit(report, format);
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "steerkit: " << e.what() << '\n';
    return 2;
  } catch (const NoThresholdError& e) {
    std::cerr << "steerkit: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "steerkit: internal error: " << e.what() << '\n';
    return 1;
  }
}
