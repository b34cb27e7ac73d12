#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sbc/rng.hpp"

namespace sbc {

// Absolute tolerance used for every "sums to one" check on probabilities.
inline constexpr double kProbabilityTolerance = 1e-12;

// i.i.d. channel law. The sensor->controller link succeeds with probability
// q; conditional on success the controller->actuator delay is i with
// probability delay_pmf[i] and the packet is lost with probability p_inf.
// Delays past the end of delay_pmf have probability zero.
struct DelayDistribution {
  double q = 1.0;
  std::vector<double> delay_pmf{1.0};
  double p_inf = 0.0;

  // p_i, zero beyond the stored support.
  double delay_probability(std::size_t i) const noexcept {
    return i < delay_pmf.size() ? delay_pmf[i] : 0.0;
  }
  // q * sum_{l=0}^{last} p_l.
  double arrival_probability_up_to(std::size_t last) const noexcept;
};

// Throws DistributionError (kRange or kNormalization) when the law is
// malformed.
void validate(const DelayDistribution& dist);

// Controller->actuator delay: a finite number of steps or a loss.
class Delay {
 public:
  static constexpr Delay finite(std::size_t steps) noexcept {
    return Delay(Kind::kFinite, steps);
  }
  static constexpr Delay infinite() noexcept {
    return Delay(Kind::kInfinite, 0);
  }

  constexpr bool is_finite() const noexcept { return kind_ == Kind::kFinite; }
  constexpr bool is_infinite() const noexcept { return !is_finite(); }

  // Throws std::logic_error for an infinite delay.
  std::size_t steps() const;

  constexpr bool operator==(const Delay&) const = default;

 private:
  enum class Kind : std::uint8_t { kFinite, kInfinite };
  constexpr Delay(Kind kind, std::size_t steps) : kind_(kind), steps_(steps) {}

  Kind kind_;
  std::size_t steps_;
};

struct LinkOutcome {
  bool gamma = false;
  Delay tau = Delay::infinite();

  bool operator==(const LinkOutcome&) const = default;
};

// Two-stage draw: gamma ~ Bernoulli(q); on success tau ~ (p_0, ..., p_inf).
// Consumes one uniform for gamma and, on success, one more for tau.
LinkOutcome sample_outcome(const DelayDistribution& dist, Rng& rng);

// Unconditional law of tau: Pr{tau = i} = q p_i and
// Pr{tau = inf} = q p_inf + (1 - q).
struct UnconditionalDelayLaw {
  std::vector<double> finite;
  double infinite = 0.0;

  double total() const noexcept;
};

UnconditionalDelayLaw unconditional_tau_pmf(const DelayDistribution& dist);

}  // namespace sbc
