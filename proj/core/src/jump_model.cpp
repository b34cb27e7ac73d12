#include "sbc/jump_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sbc/actuator.hpp"
#include "sbc/error.hpp"

namespace sbc {

std::optional<std::size_t> max_supported_delay(const DelayDistribution& dist,
                                               std::size_t horizon) {
  if (!(dist.q > 0.0)) return std::nullopt;
  const std::size_t last = std::min(horizon, dist.delay_pmf.empty()
                                                 ? std::size_t{0}
                                                 : dist.delay_pmf.size() - 1);
  for (std::size_t i = last + 1; i-- > 0;) {
    if (dist.delay_probability(i) > 0.0) return i;
  }
  return std::nullopt;
}

long long closed_form_selector_index(std::size_t horizon, std::size_t n_bar,
                                     std::size_t lambda) {
  const long long age = static_cast<long long>(horizon) - static_cast<long long>(lambda);
  const long long nb = static_cast<long long>(n_bar);
  return age + (age - 1) * nb - age * (age - 1) / 2;
}

SelectorTable::SelectorTable(std::size_t horizon,
                             std::optional<std::size_t> n_bar,
                             std::size_t input_dim)
    : horizon_(horizon), input_dim_(input_dim), n_bar_(n_bar) {
  if (horizon_ == 0) throw InvalidArgument("build_selectors: N must be >= 1");
  if (input_dim_ == 0) throw InvalidArgument("build_selectors: p must be >= 1");
  if (n_bar_ && *n_bar_ > horizon_) {
    throw InvalidArgument("build_selectors: N_bar = " + std::to_string(*n_bar_) +
                          " exceeds N = " + std::to_string(horizon_));
  }
  if (trivial()) return;

  // A sequence computed d steps ago can still be playing out for any
  // d <= N-1, whatever the delay support, so the stack keeps every block.
  for (std::size_t d = 1; d < horizon_; ++d) {
    block_offset_.push_back(stack_entries_);
    stack_entries_ += horizon_ - d;
  }

  shift_.resize(stack_entries_);
  for (std::size_t d = 1; d < horizon_; ++d) {
    const std::size_t length = horizon_ - d;
    for (std::size_t e = 0; e < length; ++e) {
      ShiftSource& src = shift_[block_offset(d) + e];
      if (d == 1) {
        src = {false, e + 1};
      } else {
        src = {true, block_offset(d - 1) + e + 1};
      }
    }
  }
}

std::size_t SelectorTable::block_offset(std::size_t d) const {
  if (d == 0 || d > block_offset_.size()) {
    throw InvalidArgument("SelectorTable: block " + std::to_string(d) +
                          " out of range");
  }
  return block_offset_[d - 1];
}

std::size_t SelectorTable::selected_entry(std::size_t lambda) const {
  if (lambda == 0 || lambda >= horizon_) {
    throw InvalidArgument("selected_entry: needs 0 < lambda < N");
  }
  if (trivial()) {
    throw std::logic_error("selected_entry: trivial lifted model has no stack");
  }
  const std::size_t entry = block_offset(horizon_ - lambda);
  if (entry >= stack_entries_) {
    throw std::logic_error("selected_entry: index outside the stack");
  }
  return entry;
}

Matrix SelectorTable::dense_g(std::size_t lambda) const {
  const std::size_t p = input_dim_;
  Matrix g(p, stack_entries_ * p);
  if (lambda == 0 || lambda >= horizon_) return g;
  const std::size_t entry = selected_entry(lambda);
  for (std::size_t c = 0; c < p; ++c) g(c, entry * p + c) = 1.0;
  return g;
}

Matrix SelectorTable::dense_e(std::size_t lambda) const {
  const std::size_t p = input_dim_;
  Matrix e(p, horizon_ * p);
  if (lambda != horizon_) return e;
  for (std::size_t c = 0; c < p; ++c) e(c, c) = 1.0;
  return e;
}

Matrix SelectorTable::dense_shift() const {
  const std::size_t p = input_dim_;
  Matrix s(stack_entries_ * p, stack_entries_ * p);
  for (std::size_t e = 0; e < shift_.size(); ++e) {
    if (!shift_[e].from_stack) continue;
    for (std::size_t c = 0; c < p; ++c) s(e * p + c, shift_[e].index * p + c) = 1.0;
  }
  return s;
}

Matrix SelectorTable::dense_injection() const {
  const std::size_t p = input_dim_;
  Matrix m(stack_entries_ * p, horizon_ * p);
  for (std::size_t e = 0; e < shift_.size(); ++e) {
    if (shift_[e].from_stack) continue;
    for (std::size_t c = 0; c < p; ++c) m(e * p + c, shift_[e].index * p + c) = 1.0;
  }
  return m;
}

SelectorTable build_selectors(std::size_t horizon,
                              std::optional<std::size_t> n_bar,
                              std::size_t input_dim) {
  return SelectorTable(horizon, n_bar, input_dim);
}

LiftedState initial_lifted_state(const SelectorTable& table, Vector x0) {
  LiftedState state;
  state.x = std::move(x0);
  state.stack.assign(table.stack_entries() * table.input_dim(), 0.0);
  state.valid.assign(table.stack_entries(), false);
  return state;
}

Vector lifted_input(const LiftedState& state, std::size_t lambda,
                    const InputSequence* fresh, const SelectorTable& table) {
  const std::size_t p = table.input_dim();
  if (lambda == 0) return Vector(p, 0.0);
  if (lambda > table.horizon()) {
    throw InvalidArgument("lifted_input: lambda exceeds N");
  }
  if (lambda == table.horizon()) {
    if (fresh == nullptr) {
      throw InvalidArgument("lifted_input: lambda = N needs the fresh sequence");
    }
    const VectorView head = fresh->at(0);
    return Vector(head.begin(), head.end());
  }
  const std::size_t entry = table.selected_entry(lambda);
  if (!state.valid[entry]) {
    throw std::logic_error("lifted_input: selector picked a slot with no sequence");
  }
  const auto first = state.stack.begin() + static_cast<std::ptrdiff_t>(entry * p);
  return Vector(first, first + static_cast<std::ptrdiff_t>(p));
}

LiftedState lifted_step(const LiftedState& state, std::size_t lambda,
                        const InputSequence* fresh, const SelectorTable& table,
                        const PlantModel& plant) {
  const std::size_t p = table.input_dim();
  if (state.x.size() != plant.state_dim || p != plant.input_dim ||
      state.stack.size() != table.stack_entries() * p ||
      state.valid.size() != table.stack_entries()) {
    throw InvalidArgument("lifted_step: dimension mismatch");
  }
  if (fresh != nullptr &&
      (fresh->horizon() != table.horizon() || fresh->input_dim() != p)) {
    throw InvalidArgument("lifted_step: fresh sequence has the wrong shape");
  }

  LiftedState next;
  next.x = step(plant, state.x, lifted_input(state, lambda, fresh, table));
  next.stack.assign(state.stack.size(), 0.0);
  next.valid.assign(state.valid.size(), false);
  const auto& shift = table.shift_map();
  for (std::size_t e = 0; e < shift.size(); ++e) {
    const auto& src = shift[e];
    if (src.from_stack) {
      std::copy_n(state.stack.begin() + static_cast<std::ptrdiff_t>(src.index * p), p,
                  next.stack.begin() + static_cast<std::ptrdiff_t>(e * p));
      next.valid[e] = state.valid[src.index];
    } else if (fresh != nullptr) {
      const VectorView u = fresh->at(src.index);
      std::copy(u.begin(), u.end(),
                next.stack.begin() + static_cast<std::ptrdiff_t>(e * p));
      next.valid[e] = true;
    }
  }
  return next;
}

std::vector<Vector> lifted_trajectory(const EpisodeConfig& cfg) {
  validate(cfg);
  const PlantModel& model = cfg.plant.model;

  Rng rng(cfg.seed);
  Vector x0 = sample_initial_state(cfg.initial_state, model.state_dim, rng);
  std::vector<LinkOutcome> outcomes;
  outcomes.reserve(cfg.steps);
  for (std::size_t k = 0; k < cfg.steps; ++k) {
    outcomes.push_back(sample_outcome(cfg.channel, rng));
  }
  const std::vector<std::size_t> lambda = lambda_trace(outcomes, cfg.horizon);
  const SelectorTable table = build_selectors(
      cfg.horizon, max_supported_delay(cfg.channel, cfg.horizon), model.input_dim);

  std::vector<Vector> trajectory;
  trajectory.reserve(cfg.steps);
  LiftedState state = initial_lifted_state(table, std::move(x0));
  for (std::size_t k = 0; k < cfg.steps; ++k) {
    trajectory.push_back(state.x);
    std::optional<InputSequence> fresh;
    if (outcomes[k].gamma) {
      fresh = rollout_sequence(model, cfg.plant.law, state.x, cfg.horizon);
    }
    state = lifted_step(state, lambda[k], fresh ? &*fresh : nullptr, table, model);
    const bool bounded =
        std::all_of(state.x.begin(), state.x.end(),
                    [](double v) { return std::isfinite(v); }) &&
        euclidean_norm(state.x) <= kDivergenceThreshold;
    if (!bounded) break;
  }
  return trajectory;
}

EquivalenceReport equivalence_check(const EpisodeConfig& cfg,
                                    std::size_t num_runs, std::size_t steps) {
  EquivalenceReport report;
  report.runs = num_runs;
  report.steps = steps;
  EpisodeConfig local = cfg;
  local.steps = steps;
  for (std::size_t run = 0; run < num_runs; ++run) {
    local.seed = derive_seed(cfg.seed, run);
    const SimulationTrace trace = run_episode(local);
    const std::vector<Vector> lifted = lifted_trajectory(local);
    if (lifted.size() != trace.rows.size()) report.length_mismatch = true;
    const std::size_t n = std::min(lifted.size(), trace.rows.size());
    for (std::size_t k = 0; k < n; ++k) {
      const Vector& a = lifted[k];
      const Vector& b = trace.rows[k].x;
      for (std::size_t i = 0; i < a.size(); ++i) {
        report.max_deviation = std::max(report.max_deviation, std::abs(a[i] - b[i]));
      }
      ++report.compared_states;
    }
  }
  return report;
}

}  // namespace sbc
