#include "sbc/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sbc/error.hpp"

namespace sbc {

namespace {

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

}  // namespace

double DelayDistribution::arrival_probability_up_to(
    std::size_t last) const noexcept {
  double sum = 0.0;
  for (std::size_t l = 0; l <= last && l < delay_pmf.size(); ++l) {
    sum += delay_pmf[l];
  }
  return q * sum;
}

void validate(const DelayDistribution& dist) {
  using Kind = DistributionError::Kind;
  if (!is_probability(dist.q)) {
    throw DistributionError(Kind::kRange,
                            "q = " + std::to_string(dist.q) + " not in [0, 1]");
  }
  if (!is_probability(dist.p_inf)) {
    throw DistributionError(Kind::kRange, "p_inf = " +
                                              std::to_string(dist.p_inf) +
                                              " not in [0, 1]");
  }
  double sum = dist.p_inf;
  for (std::size_t i = 0; i < dist.delay_pmf.size(); ++i) {
    if (!is_probability(dist.delay_pmf[i])) {
      throw DistributionError(Kind::kRange,
                              "delay_pmf[" + std::to_string(i) + "] = " +
                                  std::to_string(dist.delay_pmf[i]) +
                                  " not in [0, 1]");
    }
    sum += dist.delay_pmf[i];
  }
  if (std::abs(sum - 1.0) > kProbabilityTolerance) {
    throw DistributionError(Kind::kNormalization,
                            "sum(delay_pmf) + p_inf = " + std::to_string(sum) +
                                ", expected 1");
  }
}

std::size_t Delay::steps() const {
  if (!is_finite()) throw std::logic_error("Delay::steps on an infinite delay");
  return steps_;
}

LinkOutcome sample_outcome(const DelayDistribution& dist, Rng& rng) {
  if (!(rng.uniform() < dist.q)) return LinkOutcome{false, Delay::infinite()};

  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t last_positive = dist.delay_pmf.size();
  for (std::size_t i = 0; i < dist.delay_pmf.size(); ++i) {
    if (dist.delay_pmf[i] <= 0.0) continue;
    cumulative += dist.delay_pmf[i];
    last_positive = i;
    if (u < cumulative) return LinkOutcome{true, Delay::finite(i)};
  }
  // Rounding in the cumulative sum must not turn a loss-free law lossy.
  if (dist.p_inf == 0.0 && last_positive < dist.delay_pmf.size()) {
    return LinkOutcome{true, Delay::finite(last_positive)};
  }
  return LinkOutcome{true, Delay::infinite()};
}

double UnconditionalDelayLaw::total() const noexcept {
  double sum = infinite;
  for (const double p : finite) sum += p;
  return sum;
}

UnconditionalDelayLaw unconditional_tau_pmf(const DelayDistribution& dist) {
  UnconditionalDelayLaw law;
  law.finite.reserve(dist.delay_pmf.size());
  for (const double p : dist.delay_pmf) law.finite.push_back(dist.q * p);
  law.infinite = dist.q * dist.p_inf + (1.0 - dist.q);
  return law;
}

}  // namespace sbc
