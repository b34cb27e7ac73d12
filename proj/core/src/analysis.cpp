#include "sbc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sbc/error.hpp"

namespace sbc {

namespace {

void require_rho(double rho) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw InvalidArgument("rho = " + std::to_string(rho) + " not in [0, 1)");
  }
}

double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace

MarkovChainModel transition_matrix(const DelayDistribution& dist,
                                   std::size_t horizon) {
  if (horizon == 0) throw InvalidArgument("transition_matrix: horizon must be >= 1");
  validate(dist);

  const std::size_t n = horizon;
  MarkovChainModel model;
  model.horizon = n;
  model.transition = Matrix(n + 1, n + 1);
  Matrix& p = model.transition;

  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = i; j <= n; ++j) {
      p(i, j) = dist.q * dist.delay_probability(n - j);
    }
    p(i, i - 1) = clamp_probability(1.0 - dist.arrival_probability_up_to(n - i));
  }
  for (std::size_t j = 0; j <= n; ++j) p(0, j) = p(1, j);

  model.sub_transition = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) model.sub_transition(i, j) = p(i + 1, j + 1);
  }
  model.sigma.resize(n);
  for (std::size_t j = 0; j < n; ++j) model.sigma[j] = p(0, j + 1);
  model.stay_empty = p(0, 0);
  return model;
}

ReturnTimeDistribution return_time_pmf(const MarkovChainModel& model,
                                       std::size_t max_return_time) {
  if (max_return_time == 0) {
    throw InvalidArgument("return_time_pmf: J_max must be >= 1");
  }
  ReturnTimeDistribution out;
  out.pmf.assign(max_return_time, 0.0);
  if (model.no_return()) {
    out.no_return = true;
    return out;
  }

  const double p00 = model.stay_empty;
  out.pmf[0] = p00;
  std::vector<double> row = model.sigma;  // sigma^T P^{j-2}
  for (std::size_t j = 2; j <= max_return_time; ++j) {
    out.pmf[j - 1] = p00 * row[0];
    row = row_times(row, model.sub_transition);
  }

  double sum = 0.0;
  for (const double pj : out.pmf) sum += pj;
  out.tail_mass = std::max(0.0, 1.0 - sum);
  return out;
}

double omega(const MarkovChainModel& model, double rho) {
  require_rho(rho);
  if (model.no_return()) return 0.0;

  const std::size_t n = model.horizon;
  Matrix system = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) system(i, j) -= rho * model.sub_transition(i, j);
  }
  std::vector<double> e1(n, 0.0);
  e1[0] = 1.0;
  const std::vector<double> y = solve(std::move(system), std::move(e1));

  double sigma_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) sigma_y += model.sigma[i] * y[i];
  const double value = model.stay_empty * (1.0 + rho * sigma_y);
  if (!std::isfinite(value)) throw NumericError("omega: non-finite result");
  return value;
}

double mean_return_time(const MarkovChainModel& model) {
  if (model.no_return()) return std::numeric_limits<double>::infinity();
  // Stationary law: pi^T (P - I) = 0 with the last balance equation replaced
  // by sum(pi) = 1. The mean return time to 0 is 1 / pi_0.
  const std::size_t m = model.horizon + 1;
  Matrix system(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      system(j, i) = model.transition(i, j) - (i == j ? 1.0 : 0.0);
    }
  }
  std::vector<double> rhs(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) system(m - 1, i) = 1.0;
  rhs[m - 1] = 1.0;
  const std::vector<double> pi = solve(std::move(system), std::move(rhs));
  if (!(pi[0] > 0.0)) throw NumericError("mean_return_time: state 0 has no stationary mass");
  return 1.0 / pi[0];
}

double omega(const DelayDistribution& dist, std::size_t horizon, double rho) {
  return omega(transition_matrix(dist, horizon), rho);
}

SeriesEvaluation omega_series(const MarkovChainModel& model, double rho,
                              double tolerance, std::size_t max_terms) {
  require_rho(rho);
  SeriesEvaluation out;
  if (model.no_return()) return out;

  double sigma_mass = 0.0;
  for (const double s : model.sigma) sigma_mass += s;

  const std::size_t n = model.horizon;
  std::vector<double> column(n, 0.0);  // (rho P)^j e_1
  column[0] = 1.0;
  double rho_power = 1.0;              // rho^j bounds max(column)
  double sum = 0.0;
  while (out.terms < max_terms) {
    double term = 0.0;
    for (std::size_t i = 0; i < n; ++i) term += model.sigma[i] * column[i];
    sum += rho * term;
    ++out.terms;

    rho_power *= rho;
    // Remaining terms are bounded by p00 * sigma_mass * rho^{j+2} / (1 - rho).
    out.remainder_bound =
        model.stay_empty * sigma_mass * rho * rho_power / (1.0 - rho);
    if (out.remainder_bound < tolerance) break;

    column = times(model.sub_transition, column);
    for (double& c : column) c *= rho;
  }
  out.value = model.stay_empty * (1.0 + sum);
  return out;
}

SeriesEvaluation expected_rho_power(const DelayDistribution& dist,
                                    std::size_t horizon, double rho,
                                    double tolerance) {
  require_rho(rho);
  const MarkovChainModel model = transition_matrix(dist, horizon);
  if (model.no_return()) return {};

  // Terms with j > J carry at most tail_mass * rho^J <= rho^J.
  std::size_t cutoff = 1;
  if (rho > 0.0) {
    const double needed = std::ceil(std::log(tolerance) / std::log(rho));
    cutoff = static_cast<std::size_t>(std::clamp(needed, 1.0, 1e6));
  }
  const ReturnTimeDistribution law = return_time_pmf(model, cutoff);

  SeriesEvaluation out;
  double weight = 1.0;  // rho^{j-1}
  for (std::size_t j = 1; j <= cutoff; ++j) {
    out.value += law.probability(j) * weight;
    weight *= rho;
  }
  out.terms = cutoff;
  out.remainder_bound = law.tail_mass * weight;
  return out;
}

std::string_view to_string(Verdict verdict) noexcept {
  return verdict == Verdict::kStable ? "stable" : "not-certified";
}

StabilityReport stability_verdict(const DelayDistribution& dist,
                                  std::size_t horizon, double rho, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidArgument("alpha = " + std::to_string(alpha) + " must be > 0");
  }
  StabilityReport report;
  report.horizon = horizon;
  report.omega = omega(dist, horizon, rho);
  report.threshold = 1.0 / alpha;
  report.margin = report.threshold - report.omega;
  report.verdict =
      report.omega < report.threshold ? Verdict::kStable : Verdict::kNotCertified;
  return report;
}

}  // namespace sbc
