#include "sbc/commands.hpp"

#include <algorithm>
#include <cmath>

#include "sbc/analysis.hpp"
#include "sbc/csv.hpp"
#include "sbc/jump_model.hpp"

namespace sbc {

namespace {

using csv::append_row;
using csv::format_double;

std::string num(std::size_t v) { return std::to_string(v); }

std::string stderr_field(const CostReport& report) {
  return report.standard_error ? format_double(*report.standard_error) : "NA";
}

// Independent sub-seeds for the verification stages.
enum class VerifyStream : std::uint64_t {
  kEquivalence = 1,
  kTransitions = 2,
  kReturns = 3,
  kDrift = 4,
};

std::uint64_t verify_seed(const RunConfig& cfg, std::size_t horizon,
                          VerifyStream stream) {
  return derive_seed(derive_seed(cfg.seed, static_cast<std::uint64_t>(stream)),
                     horizon);
}

void ensure_output_dir(const RunConfig& cfg) {
  std::filesystem::create_directories(cfg.output_dir);
}

}  // namespace

std::string transition_matrix_csv(const RunConfig& cfg) {
  std::string out;
  append_row(out, {"N", "from", "to", "probability"});
  for (const std::size_t n : cfg.horizons.values()) {
    const MarkovChainModel model = transition_matrix(cfg.channel, n);
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; j <= n; ++j) {
        append_row(out, {num(n), num(i), num(j), format_double(model.transition(i, j))});
      }
    }
  }
  return out;
}

std::string return_pmf_csv(const RunConfig& cfg) {
  std::string out;
  append_row(out, {"N", "j", "probability"});
  for (const std::size_t n : cfg.horizons.values()) {
    const ReturnTimeDistribution law = return_time_pmf(transition_matrix(cfg.channel, n));
    for (std::size_t j = 1; j <= law.pmf.size(); ++j) {
      append_row(out, {num(n), num(j), format_double(law.probability(j))});
    }
  }
  return out;
}

std::string stability_csv(const RunConfig& cfg) {
  std::string out;
  append_row(out, {"N", "omega", "inv_alpha", "verdict"});
  for (const std::size_t n : cfg.horizons.values()) {
    const StabilityReport r = stability_verdict(cfg.channel, n, cfg.rho, cfg.alpha);
    append_row(out, {num(n), format_double(r.omega), format_double(r.threshold),
                     to_string(r.verdict)});
  }
  return out;
}

SimulationResults simulate_all(const RunConfig& cfg, std::size_t workers) {
  SimulationResults results;
  for (const std::size_t n : cfg.horizons.values()) {
    results.horizons.push_back(n);
    results.reports.push_back(monte_carlo(episode_config(cfg, n), cfg.episodes, workers));
  }
  return results;
}

std::string episodes_csv(const SimulationResults& results) {
  std::string out;
  append_row(out, {"N", "episode", "seed", "J", "diverged"});
  for (std::size_t h = 0; h < results.horizons.size(); ++h) {
    for (const EpisodeResult& e : results.reports[h].episodes) {
      append_row(out, {num(results.horizons[h]), num(e.episode), std::to_string(e.seed),
                       format_double(e.cost), e.diverged ? "1" : "0"});
    }
  }
  return out;
}

std::string summary_csv(const SimulationResults& results) {
  std::string out;
  append_row(out, {"N", "mean_J", "stderr_J"});
  for (std::size_t h = 0; h < results.horizons.size(); ++h) {
    const CostReport& r = results.reports[h];
    append_row(out, {num(results.horizons[h]), format_double(r.mean_cost), stderr_field(r)});
  }
  return out;
}

std::string sweep_csv(const RunConfig& cfg, std::size_t workers) {
  std::string out;
  append_row(out, {"N", "omega", "verdict", "mean_J", "stderr_J"});
  for (const std::size_t n : cfg.horizons.values()) {
    const StabilityReport s = stability_verdict(cfg.channel, n, cfg.rho, cfg.alpha);
    const CostReport c = monte_carlo(episode_config(cfg, n), cfg.episodes, workers);
    append_row(out, {num(n), format_double(s.omega), to_string(s.verdict),
                     format_double(c.mean_cost), stderr_field(c)});
  }
  return out;
}

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) {
    return !c.applicable || c.skipped || c.passed;
  });
}

VerifyReport run_verification(const RunConfig& cfg, const VerifySettings& settings) {
  VerifyReport report;
  for (const std::size_t n : cfg.horizons.values()) {
    EpisodeConfig ep = episode_config(cfg, n);
    const MarkovChainModel chain = transition_matrix(cfg.channel, n);

    ep.seed = verify_seed(cfg, n, VerifyStream::kEquivalence);
    const EquivalenceReport eq =
        equivalence_check(ep, settings.equivalence_runs, settings.equivalence_steps);
    report.checks.push_back({n, "jump_model_max_deviation", eq.max_deviation, 0.0, true,
                             false, eq.max_deviation == 0.0 && !eq.length_mismatch});

    ep.seed = verify_seed(cfg, n, VerifyStream::kTransitions);
    const TransitionCounts counts = empirical_transition_counts(ep, settings.transition_steps);
    double max_error = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      if (counts.low_confidence[i]) continue;
      for (std::size_t j = 0; j <= n; ++j) {
        max_error = std::max(max_error,
                             std::abs(counts.frequencies(i, j) - chain.transition(i, j)));
      }
    }
    report.checks.push_back({n, "transition_max_abs_error", max_error,
                             settings.transition_tolerance, true, false,
                             max_error <= settings.transition_tolerance});

    VerifyCheck ks{n, "return_time_ks_distance", 0.0, settings.ks_tolerance, false, false, false};
    VerifyCheck drift{n, "drift_ratio", 0.0, 0.0, false, false, false};
    if (!chain.no_return()) {
      const double mean_return = mean_return_time(chain);
      ks.applicable = true;
      ks.skipped = static_cast<double>(settings.returns) * mean_return >
                   settings.max_expected_steps;
      if (!ks.skipped) {
        ep.seed = verify_seed(cfg, n, VerifyStream::kReturns);
        const ReturnTimeHistogram hist = empirical_return_times(ep, settings.returns);
        const ReturnTimeDistribution model =
            return_time_pmf(chain, std::max(kDefaultMaxReturnTime, hist.counts.size()));
        ks.value = ks_distance(hist, model);
        ks.passed = !hist.partial && ks.value < settings.ks_tolerance;
      }

      drift.applicable = true;
      drift.skipped = static_cast<double>(settings.drift_cycles) * mean_return >
                      settings.max_expected_steps;
      if (!drift.skipped) {
        ep.seed = verify_seed(cfg, n, VerifyStream::kDrift);
        const DriftEstimate d = empirical_drift(ep, settings.drift_cycles);
        drift.value = d.ratio;
        drift.limit = d.bound + settings.drift_stderr_multiplier * d.standard_error;
        drift.applicable = d.applicable;
        drift.passed = d.applicable && d.within_bound(settings.drift_stderr_multiplier);
      }
    }
    report.checks.push_back(ks);
    report.checks.push_back(drift);
  }
  return report;
}

std::string verify_csv(const VerifyReport& report) {
  std::string out;
  append_row(out, {"N", "check", "value", "limit", "status"});
  for (const VerifyCheck& c : report.checks) {
    const std::string_view status = !c.applicable ? "not-applicable"
                                    : c.skipped   ? "skipped"
                                    : c.passed    ? "pass"
                                                  : "fail";
    append_row(out, {num(c.horizon), c.name, format_double(c.value),
                     format_double(c.limit), status});
  }
  return out;
}

void cmd_analyze(const RunConfig& cfg, std::ostream& log) {
  ensure_output_dir(cfg);
  csv::write_file(cfg.output_dir / "transition_matrix.csv", transition_matrix_csv(cfg));
  csv::write_file(cfg.output_dir / "return_pmf.csv", return_pmf_csv(cfg));
  csv::write_file(cfg.output_dir / "stability.csv", stability_csv(cfg));
  for (const std::size_t n : cfg.horizons.values()) {
    const StabilityReport r = stability_verdict(cfg.channel, n, cfg.rho, cfg.alpha);
    log << "N=" << n << " omega=" << format_double(r.omega)
        << " inv_alpha=" << format_double(r.threshold) << " verdict=" << to_string(r.verdict)
        << '\n';
  }
}

void cmd_simulate(const RunConfig& cfg, std::ostream& log, std::size_t workers) {
  ensure_output_dir(cfg);
  const SimulationResults results = simulate_all(cfg, workers);
  csv::write_file(cfg.output_dir / "episodes.csv", episodes_csv(results));
  csv::write_file(cfg.output_dir / "summary.csv", summary_csv(results));
  for (std::size_t h = 0; h < results.horizons.size(); ++h) {
    const CostReport& r = results.reports[h];
    log << "N=" << results.horizons[h] << " mean_J=" << format_double(r.mean_cost)
        << " stderr_J=" << stderr_field(r) << " diverged=" << r.diverged_count
        << (r.all_diverged ? " (all episodes diverged)" : "") << '\n';
  }
}

void cmd_sweep(const RunConfig& cfg, std::ostream& log, std::size_t workers) {
  ensure_output_dir(cfg);
  const std::string content = sweep_csv(cfg, workers);
  csv::write_file(cfg.output_dir / "sweep.csv", content);
  log << content;
}

bool cmd_verify(const RunConfig& cfg, std::ostream& log) {
  ensure_output_dir(cfg);
  const VerifyReport report = run_verification(cfg);
  const std::string content = verify_csv(report);
  csv::write_file(cfg.output_dir / "verify.csv", content);
  log << content;
  return report.all_passed();
}

}  // namespace sbc
