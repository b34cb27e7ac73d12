#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "sbc/linalg.hpp"
#include "sbc/network.hpp"

namespace sbc {

// Buffer-length Markov chain on states {0, ..., N}.
//
//   p_ij = q p_{N-j}                    for 1 <= i <= j
//        = 1 - q sum_{l=0}^{N-i} p_l    for i = j + 1
//        = 0                            for i >= j + 2
//   row 0 equals row 1.
//
// `sub_transition` is the block over states 1..N and `sigma` holds
// q (p_{N-1}, ..., p_1, p_0), i.e. the jump probabilities out of state 0.
struct MarkovChainModel {
  std::size_t horizon = 0;
  Matrix transition;      // (N+1) x (N+1)
  Matrix sub_transition;  // N x N
  std::vector<double> sigma;
  double stay_empty = 0.0;  // p_00 = 1 - q sum_{l=0}^{N-1} p_l

  // True when state 0 is left for good (p_00 == 0 up to the probability
  // tolerance), so no return time is ever realized.
  bool no_return() const noexcept { return stay_empty <= kProbabilityTolerance; }
};

// Throws InvalidArgument for horizon 0 and DistributionError for a malformed
// law.
MarkovChainModel transition_matrix(const DelayDistribution& dist,
                                   std::size_t horizon);

// Law of the first return time of lambda to 0.
struct ReturnTimeDistribution {
  std::vector<double> pmf;  // pmf[j - 1] = Pr{Delta = j}, j = 1..J_max
  double tail_mass = 0.0;   // 1 - sum(pmf), clamped at 0
  bool no_return = false;   // see MarkovChainModel::no_return

  double probability(std::size_t j) const noexcept {
    return j >= 1 && j <= pmf.size() ? pmf[j - 1] : 0.0;
  }
};

inline constexpr std::size_t kDefaultMaxReturnTime = 1000;

// Pr{Delta = 1} = p_00 and Pr{Delta = j} = p_00 sigma^T P^{j-2} e_1 for
// j >= 2, evaluated with repeated row-vector products.
ReturnTimeDistribution return_time_pmf(
    const MarkovChainModel& model,
    std::size_t max_return_time = kDefaultMaxReturnTime);

// Omega = p_00 (1 + rho sigma^T (I - rho P)^{-1} e_1), via a dense solve.
// Requires rho in [0, 1).
double omega(const MarkovChainModel& model, double rho);
double omega(const DelayDistribution& dist, std::size_t horizon, double rho);

// E[Delta] = 1 / pi_0 for the stationary law pi of the chain; +inf when
// state 0 is never re-entered.
double mean_return_time(const MarkovChainModel& model);

struct SeriesEvaluation {
  double value = 0.0;
  std::size_t terms = 0;
  double remainder_bound = 0.0;  // bound on the truncated part
};

// Same quantity as omega(), summing rho sigma^T (rho P)^j e_1 term by term
// until the geometric remainder bound drops below `tolerance`.
SeriesEvaluation omega_series(const MarkovChainModel& model, double rho,
                              double tolerance = 1e-17,
                              std::size_t max_terms = 1'000'000);

// sum_j Pr{Delta = j} rho^{j-1} summed over return_time_pmf, truncated where
// the tail bound tail_mass * rho^J falls below `tolerance`.
SeriesEvaluation expected_rho_power(const DelayDistribution& dist,
                                    std::size_t horizon, double rho,
                                    double tolerance = 1e-17);

enum class Verdict { kStable, kNotCertified };

std::string_view to_string(Verdict verdict) noexcept;

struct StabilityReport {
  std::size_t horizon = 0;
  double omega = 0.0;
  double threshold = 0.0;  // 1 / alpha
  double margin = 0.0;     // threshold - omega
  Verdict verdict = Verdict::kNotCertified;
};

// Stable iff Omega < 1/alpha (strict). kNotCertified is not a proof of
// instability. Throws InvalidArgument for alpha <= 0 or rho outside [0, 1).
StabilityReport stability_verdict(const DelayDistribution& dist,
                                  std::size_t horizon, double rho, double alpha);

}  // namespace sbc
