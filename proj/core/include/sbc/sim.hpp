#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "sbc/actuator.hpp"
#include "sbc/analysis.hpp"
#include "sbc/network.hpp"
#include "sbc/plant.hpp"
#include "sbc/rng.hpp"

namespace sbc {

// States with |x| above this are treated as diverged.
inline constexpr double kDivergenceThreshold = 1e12;

struct InitialStateSpec {
  enum class Family { kGaussian, kFixed };

  Family family = Family::kGaussian;
  double stddev = 1.0;  // per-component standard deviation (kGaussian)
  Vector fixed;         // used as-is (kFixed)

  static InitialStateSpec gaussian(double stddev) {
    return {Family::kGaussian, stddev, {}};
  }
  static InitialStateSpec fixed_at(Vector x0) {
    return {Family::kFixed, 0.0, std::move(x0)};
  }
};

struct EpisodeConfig {
  PlantBundle plant = saturating_example();
  std::size_t horizon = 3;
  DelayDistribution channel;
  std::size_t steps = 50;
  InitialStateSpec initial_state;
  std::uint64_t seed = 0;
};

// Throws InvalidArgument / DistributionError.
void validate(const EpisodeConfig& cfg);

// Draws x(0). Consumes `dim` normals for the Gaussian family, nothing for a
// fixed state.
Vector sample_initial_state(const InitialStateSpec& spec, std::size_t dim,
                            Rng& rng);

// Control packets in flight, keyed by arrival time. Lost packets are never
// scheduled.
class PendingPackets {
 public:
  void schedule(ControlPacket packet);
  std::vector<ControlPacket> take_due(std::size_t now);
  std::size_t size() const noexcept;

 private:
  std::map<std::size_t, std::vector<ControlPacket>> by_arrival_;
};

struct TraceRow {
  std::size_t k = 0;
  Vector x;
  Vector u;
  bool gamma = false;
  Delay tau = Delay::infinite();
  std::size_t lambda = 0;
  std::optional<std::size_t> active_origin;
};

struct SimulationTrace {
  std::vector<TraceRow> rows;
  std::uint64_t seed = 0;
  bool diverged = false;  // rows stop at the last finite, bounded state

  std::vector<LinkOutcome> outcomes() const;
  std::vector<std::size_t> lambdas() const;
};

// One closed-loop episode. Per tick k: draw (gamma, tau); on gamma = 1
// compute the tentative sequence from x(k) and schedule it for k + tau;
// ingest the arrivals due at k; read out u(k); step the plant.
// The rng is seeded with cfg.seed; x(0) is drawn before any channel outcome.
SimulationTrace run_episode(const EpisodeConfig& cfg);

// J = (1/K) sum_{k<K} |x(k)|^2 over a complete trace; +inf when diverged.
double episode_cost(const SimulationTrace& trace, std::size_t steps);

struct EpisodeResult {
  std::size_t episode = 0;
  std::uint64_t seed = 0;
  double cost = 0.0;
  bool diverged = false;
};

struct CostReport {
  std::vector<EpisodeResult> episodes;
  double mean_cost = 0.0;                    // over non-diverged episodes
  std::optional<double> standard_error;      // needs >= 2 finite episodes
  std::size_t diverged_count = 0;
  bool all_diverged = false;
};

// Seed for episode i is derive_seed(cfg.seed, i); results do not depend on
// `workers`.
CostReport monte_carlo(const EpisodeConfig& cfg, std::size_t num_episodes,
                       std::size_t workers = 1);

// Channel + actuator buffer only (no plant): yields lambda(0), lambda(1), ...
// using the operational buffer with dummy payloads.
class BufferLengthProcess {
 public:
  BufferLengthProcess(const DelayDistribution& dist, std::size_t horizon,
                      std::uint64_t seed);

  std::size_t advance();
  std::size_t time() const noexcept { return next_k_; }

 private:
  DelayDistribution dist_;
  Rng rng_;
  ActuatorBuffer buffer_;
  PendingPackets pending_;
  InputSequence payload_;
  std::size_t next_k_ = 0;
};

struct TransitionCounts {
  Matrix counts;       // raw transition counts, (N+1) x (N+1)
  Matrix frequencies;  // counts normalized per row
  std::vector<std::size_t> row_exits;
  std::vector<bool> low_confidence;  // fewer than kMinRowExits exits
};

inline constexpr std::size_t kMinRowExits = 1000;

// Counts lambda(k) -> lambda(k+1) for k = 1..total_steps. The step out of
// k = 0 is excluded because lambda(0) is forced to zero.
TransitionCounts empirical_transition_counts(const EpisodeConfig& cfg,
                                             std::size_t total_steps);

struct ReturnTimeHistogram {
  std::vector<std::size_t> counts;  // counts[j - 1] = #{Delta = j}
  std::size_t returns = 0;
  std::size_t steps_simulated = 0;
  bool partial = false;  // stopped at the step limit
};

// Gaps between consecutive zeros of lambda, skipping the cycle that starts at
// k = 0. Throws PreconditionError when state 0 is never re-entered.
// max_steps = 0 picks 1000 * num_returns + 10000.
ReturnTimeHistogram empirical_return_times(const EpisodeConfig& cfg,
                                           std::size_t num_returns,
                                           std::size_t max_steps = 0);

// sup_j |F_empirical(j) - F_model(j)|.
double ks_distance(const ReturnTimeHistogram& empirical,
                   const ReturnTimeDistribution& model);

struct DriftEstimate {
  bool applicable = false;
  std::size_t cycles = 0;
  std::size_t episodes = 0;
  std::size_t truncated_cycles = 0;  // still open at the extension cap
  double ratio = 0.0;  // sum V(x(k_{i+1})) / sum V(x(k_i))
  double standard_error = 0.0;
  double omega = 0.0;
  double bound = 0.0;  // alpha * Omega

  bool within_bound(double num_stderr = 3.0) const noexcept {
    return ratio <= bound + num_stderr * standard_error;
  }
};

inline constexpr std::size_t kDriftInitialExtension = 256;
inline constexpr std::size_t kDriftMaxExtension = std::size_t{1} << 16;

// Per-cycle contraction of V sampled at the zeros of lambda, pooled over
// episodes (seeds derive_seed(cfg.seed, i)) until at least num_cycles cycles
// are collected. Each episode contributes the cycles that start at
// 1 <= k_i < cfg.steps; the episode is run past cfg.steps until those cycles
// close (or the extension cap is hit, counted in truncated_cycles). The cycle
// starting at k = 0 is skipped.
DriftEstimate empirical_drift(const EpisodeConfig& cfg, std::size_t num_cycles);

// Mean V(x(k_i)) for i = 0..num_cycles, over the episodes that reach the
// num_cycles-th return within cfg.steps.
struct DecayProfile {
  std::vector<double> mean_value;
  std::size_t episodes_used = 0;
};

DecayProfile cycle_decay_profile(const EpisodeConfig& cfg,
                                 std::size_t num_episodes,
                                 std::size_t num_cycles);

// Times k in the trace with lambda(k) = 0.
std::vector<std::size_t> empty_buffer_instants(const SimulationTrace& trace);

// Compares the applied input with kappa(x(k)) whenever lambda(k) > 0.
//
// With no disturbance the two agree bitwise as long as every tick in
// [T(k), k) also applied kappa of the true state. A mismatch is "explained"
// when some tick in that window deviated (for instance an empty buffer that
// applied 0 while the sequence origin assumed kappa was applied).
struct NominalConsistency {
  std::size_t active_steps = 0;
  std::size_t matching = 0;
  std::size_t explained_mismatches = 0;
  std::size_t unexplained_mismatches = 0;
};

NominalConsistency nominal_consistency(const SimulationTrace& trace,
                                       const PlantBundle& plant);

}  // namespace sbc
