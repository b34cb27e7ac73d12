#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "sbc/linalg.hpp"
#include "sbc/network.hpp"
#include "sbc/plant.hpp"
#include "sbc/sim.hpp"

namespace sbc {

// Largest delay i <= N with Pr{tau = i} > 0, or nullopt when no finite delay
// up to N is possible (q = 0, or all mass beyond N).
std::optional<std::size_t> max_supported_delay(const DelayDistribution& dist,
                                               std::size_t horizon);

// Closed-form stacked-entry index
//   eta = (N - lambda) + (N - lambda - 1) N_bar - (N - lambda)(N - lambda - 1)/2
// for 0 < lambda < N, in exact integer arithmetic (may be out of range; see
// SelectorTable::selected_entry for the index actually used).
long long closed_form_selector_index(std::size_t horizon, std::size_t n_bar,
                                     std::size_t lambda);

// Routing tables of the lifted model
//   theta(k) = [x(k); U(k)],  U(k) = [C_1 u(k-1); C_2 u(k-2); ...]
// where block d holds the unexpired tail u(k;k-d), ..., u(k-d+N-1;k-d) of
// the sequence computed d steps ago (N - d entries of p values each).
//
// Selectors and the shift are index maps; dense G, E, S and the injection
// matrix are reconstructed on demand for tests.
class SelectorTable {
 public:
  // A trivial table (no stack, lambda stays 0) is built when n_bar is
  // nullopt. Otherwise the stack spans blocks d = 1..N-1.
  SelectorTable(std::size_t horizon, std::optional<std::size_t> n_bar,
                std::size_t input_dim);

  std::size_t horizon() const noexcept { return horizon_; }
  std::size_t input_dim() const noexcept { return input_dim_; }
  std::optional<std::size_t> n_bar() const noexcept { return n_bar_; }
  bool trivial() const noexcept { return !n_bar_; }

  // Number of stacked p-vectors (nu); the stack has nu * p scalars.
  std::size_t stack_entries() const noexcept { return stack_entries_; }
  std::size_t block_count() const noexcept { return block_offset_.size(); }
  // First entry of block d (1-based block index).
  std::size_t block_offset(std::size_t d) const;

  // For 0 < lambda < N: entry of U holding u(k; k - (N - lambda)).
  std::size_t selected_entry(std::size_t lambda) const;

  // For each entry of U(k+1): the source entry in U(k) (`from_stack`) or in
  // the fresh sequence (injection).
  struct ShiftSource {
    bool from_stack = false;
    std::size_t index = 0;
  };
  const std::vector<ShiftSource>& shift_map() const noexcept { return shift_; }

  Matrix dense_g(std::size_t lambda) const;  // p x nu p
  Matrix dense_e(std::size_t lambda) const;  // p x N p
  Matrix dense_shift() const;                // nu p x nu p
  Matrix dense_injection() const;            // nu p x N p

 private:
  std::size_t horizon_;
  std::size_t input_dim_;
  std::optional<std::size_t> n_bar_;
  std::size_t stack_entries_ = 0;
  std::vector<std::size_t> block_offset_;
  std::vector<ShiftSource> shift_;
};

// Builds the selector table for horizon N, N_bar and input dimension p.
// Requires 1 <= N_bar <= N when present.
SelectorTable build_selectors(std::size_t horizon,
                              std::optional<std::size_t> n_bar,
                              std::size_t input_dim);

struct LiftedState {
  Vector x;
  std::vector<double> stack;  // U, stack_entries * p scalars
  std::vector<bool> valid;    // per entry: filled from a real sequence
};

LiftedState initial_lifted_state(const SelectorTable& table, Vector x0);

// Plant input G_lambda U + E_lambda u_seq (zero for lambda = 0).
// Throws std::logic_error if the selected entry was never filled by a real
// sequence, and InvalidArgument if lambda = N without a fresh sequence.
Vector lifted_input(const LiftedState& state, std::size_t lambda,
                    const InputSequence* fresh, const SelectorTable& table);

// theta(k+1) = F_lambda(theta(k), u_seq). A missing u_seq (gamma = 0) shifts
// in a zero sequence marked invalid.
LiftedState lifted_step(const LiftedState& state, std::size_t lambda,
                        const InputSequence* fresh, const SelectorTable& table,
                        const PlantModel& plant);

// x-trajectory of the lifted model driven by the same seed as run_episode.
std::vector<Vector> lifted_trajectory(const EpisodeConfig& cfg);

struct EquivalenceReport {
  std::size_t runs = 0;
  std::size_t steps = 0;
  std::size_t compared_states = 0;
  double max_deviation = 0.0;  // max_k |x_lifted(k) - x_operational(k)|_inf
  bool length_mismatch = false;
};

// Runs num_runs seeds (derive_seed(cfg.seed, i)) through both simulators.
EquivalenceReport equivalence_check(const EpisodeConfig& cfg,
                                    std::size_t num_runs, std::size_t steps);

}  // namespace sbc
