#pragma once

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "sbc/config.hpp"
#include "sbc/sim.hpp"

namespace sbc {

// CSV producers. Each returns the full file content (header included).
std::string transition_matrix_csv(const RunConfig& cfg);  // N,from,to,probability
std::string return_pmf_csv(const RunConfig& cfg);         // N,j,probability
std::string stability_csv(const RunConfig& cfg);          // N,omega,inv_alpha,verdict

struct SimulationResults {
  std::vector<std::size_t> horizons;
  std::vector<CostReport> reports;  // parallel to horizons
};

SimulationResults simulate_all(const RunConfig& cfg, std::size_t workers = 1);
std::string episodes_csv(const SimulationResults& results);  // N,episode,seed,J,diverged
std::string summary_csv(const SimulationResults& results);   // N,mean_J,stderr_J

// N,omega,verdict,mean_J,stderr_J. stderr_J is "NA" for a single episode.
std::string sweep_csv(const RunConfig& cfg, std::size_t workers = 1);

// Oracle comparisons run by `verify`.
struct VerifyCheck {
  std::size_t horizon = 0;
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool applicable = true;
  bool skipped = false;  // applicable but too expensive to simulate
  bool passed = false;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;

  bool all_passed() const;
};

struct VerifySettings {
  std::size_t equivalence_runs = 20;
  std::size_t equivalence_steps = 200;
  std::size_t transition_steps = 100'000;
  double transition_tolerance = 0.02;
  std::size_t returns = 10'000;
  double ks_tolerance = 0.02;
  std::size_t drift_cycles = 5'000;
  double drift_stderr_multiplier = 3.0;
  // Return-time and drift checks are skipped when the expected number of
  // simulated steps (samples times mean return time) exceeds this.
  double max_expected_steps = 2e7;
};

VerifyReport run_verification(const RunConfig& cfg,
                              const VerifySettings& settings = {});
std::string verify_csv(const VerifyReport& report);  // N,check,value,limit,status

// Subcommands: write their CSV files into cfg.output_dir and print a short
// human-readable summary to `log`. cmd_verify returns false when any
// applicable check fails.
void cmd_analyze(const RunConfig& cfg, std::ostream& log);
void cmd_simulate(const RunConfig& cfg, std::ostream& log, std::size_t workers = 1);
void cmd_sweep(const RunConfig& cfg, std::ostream& log, std::size_t workers = 1);
bool cmd_verify(const RunConfig& cfg, std::ostream& log);

}  // namespace sbc
