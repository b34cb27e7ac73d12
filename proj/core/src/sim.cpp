#include "sbc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "sbc/error.hpp"

namespace sbc {

namespace {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      compensation_ += (sum_ - t) + v;
    } else {
      compensation_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

bool is_bounded(VectorView x) {
  for (const double xi : x) {
    if (!std::isfinite(xi)) return false;
  }
  return euclidean_norm(x) <= kDivergenceThreshold;
}

}  // namespace

void validate(const EpisodeConfig& cfg) {
  if (cfg.horizon == 0) throw InvalidArgument("episode: horizon N must be >= 1");
  if (cfg.steps == 0) throw InvalidArgument("episode: steps must be >= 1");
  validate(cfg.channel);
  const auto& spec = cfg.initial_state;
  if (spec.family == InitialStateSpec::Family::kGaussian) {
    if (!(spec.stddev >= 0.0) || !std::isfinite(spec.stddev)) {
      throw InvalidArgument("episode: initial-state stddev must be >= 0");
    }
  } else if (spec.fixed.size() != cfg.plant.model.state_dim) {
    throw InvalidArgument("episode: fixed initial state has wrong dimension");
  }
}

Vector sample_initial_state(const InitialStateSpec& spec, std::size_t dim,
                            Rng& rng) {
  if (spec.family == InitialStateSpec::Family::kFixed) return spec.fixed;
  Vector x(dim);
  for (double& xi : x) xi = spec.stddev * rng.normal();
  return x;
}

void PendingPackets::schedule(ControlPacket packet) {
  by_arrival_[packet.arrival].push_back(std::move(packet));
}

std::vector<ControlPacket> PendingPackets::take_due(std::size_t now) {
  std::vector<ControlPacket> due;
  const auto it = by_arrival_.find(now);
  if (it != by_arrival_.end()) {
    due = std::move(it->second);
    by_arrival_.erase(it);
  }
  return due;
}

std::size_t PendingPackets::size() const noexcept {
  std::size_t n = 0;
  for (const auto& [arrival, packets] : by_arrival_) n += packets.size();
  return n;
}

std::vector<LinkOutcome> SimulationTrace::outcomes() const {
  std::vector<LinkOutcome> out;
  out.reserve(rows.size());
  for (const TraceRow& row : rows) out.push_back({row.gamma, row.tau});
  return out;
}

std::vector<std::size_t> SimulationTrace::lambdas() const {
  std::vector<std::size_t> out;
  out.reserve(rows.size());
  for (const TraceRow& row : rows) out.push_back(row.lambda);
  return out;
}

SimulationTrace run_episode(const EpisodeConfig& cfg) {
  validate(cfg);
  const PlantModel& model = cfg.plant.model;

  SimulationTrace trace;
  trace.seed = cfg.seed;
  trace.rows.reserve(cfg.steps);

  Rng rng(cfg.seed);
  Vector x = sample_initial_state(cfg.initial_state, model.state_dim, rng);
  ActuatorBuffer buffer(cfg.horizon, model.input_dim);
  PendingPackets pending;

  for (std::size_t k = 0; k < cfg.steps; ++k) {
    const LinkOutcome outcome = sample_outcome(cfg.channel, rng);
    if (outcome.gamma && outcome.tau.is_finite()) {
      pending.schedule(ControlPacket{
          k, rollout_sequence(model, cfg.plant.law, x, cfg.horizon),
          k + outcome.tau.steps()});
    }
    const std::vector<ControlPacket> arrivals = pending.take_due(k);
    buffer.ingest(arrivals, k);
    BufferReadout readout = buffer.readout(k);

    Vector next = step(model, x, readout.input);
    trace.rows.push_back(TraceRow{k, std::move(x), std::move(readout.input),
                                  outcome.gamma, outcome.tau, readout.lambda,
                                  readout.active_origin});
    if (!is_bounded(next)) {
      trace.diverged = true;
      break;
    }
    x = std::move(next);
  }
  return trace;
}

double episode_cost(const SimulationTrace& trace, std::size_t steps) {
  if (trace.diverged || trace.rows.size() < steps) {
    return std::numeric_limits<double>::infinity();
  }
  CompensatedSum sum;
  for (std::size_t k = 0; k < steps; ++k) {
    const double norm = euclidean_norm(trace.rows[k].x);
    sum.add(norm * norm);
  }
  return sum.value() / static_cast<double>(steps);
}

CostReport monte_carlo(const EpisodeConfig& cfg, std::size_t num_episodes,
                       std::size_t workers) {
  if (num_episodes == 0) throw InvalidArgument("monte_carlo: need >= 1 episode");
  validate(cfg);

  CostReport report;
  report.episodes.resize(num_episodes);
  auto run_range = [&](std::size_t first, std::size_t stride) {
    EpisodeConfig local = cfg;
    for (std::size_t i = first; i < num_episodes; i += stride) {
      local.seed = derive_seed(cfg.seed, i);
      const SimulationTrace trace = run_episode(local);
      report.episodes[i] =
          EpisodeResult{i, local.seed, episode_cost(trace, cfg.steps), trace.diverged};
    }
  };

  workers = std::clamp<std::size_t>(workers, 1, num_episodes);
  if (workers == 1) {
    run_range(0, 1);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            run_range(w, workers);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  // Aggregate in episode order so the result is independent of scheduling.
  CompensatedSum sum;
  std::size_t finite = 0;
  for (const EpisodeResult& e : report.episodes) {
    if (e.diverged) {
      ++report.diverged_count;
      continue;
    }
    sum.add(e.cost);
    ++finite;
  }
  report.all_diverged = finite == 0;
  if (finite == 0) {
    report.mean_cost = std::numeric_limits<double>::infinity();
    return report;
  }
  report.mean_cost = sum.value() / static_cast<double>(finite);
  if (finite >= 2) {
    CompensatedSum squares;
    for (const EpisodeResult& e : report.episodes) {
      if (e.diverged) continue;
      const double d = e.cost - report.mean_cost;
      squares.add(d * d);
    }
    const double variance = squares.value() / static_cast<double>(finite - 1);
    report.standard_error = std::sqrt(variance / static_cast<double>(finite));
  }
  return report;
}

BufferLengthProcess::BufferLengthProcess(const DelayDistribution& dist,
                                         std::size_t horizon, std::uint64_t seed)
    : dist_(dist),
      rng_(seed),
      buffer_(horizon, 1),
      payload_(1, std::vector<double>(horizon, 0.0)) {
  validate(dist_);
}

std::size_t BufferLengthProcess::advance() {
  const std::size_t k = next_k_++;
  const LinkOutcome outcome = sample_outcome(dist_, rng_);
  if (outcome.gamma && outcome.tau.is_finite()) {
    pending_.schedule(ControlPacket{k, payload_, k + outcome.tau.steps()});
  }
  buffer_.ingest(pending_.take_due(k), k);
  return buffer_.readout(k).lambda;
}

TransitionCounts empirical_transition_counts(const EpisodeConfig& cfg,
                                             std::size_t total_steps) {
  validate(cfg);
  const std::size_t states = cfg.horizon + 1;
  TransitionCounts out;
  out.counts = Matrix(states, states);
  out.frequencies = Matrix(states, states);
  out.row_exits.assign(states, 0);

  BufferLengthProcess process(cfg.channel, cfg.horizon, cfg.seed);
  process.advance();  // k = 0
  std::size_t previous = process.advance();
  for (std::size_t step = 0; step < total_steps; ++step) {
    const std::size_t current = process.advance();
    out.counts(previous, current) += 1.0;
    ++out.row_exits[previous];
    previous = current;
  }

  out.low_confidence.resize(states);
  for (std::size_t i = 0; i < states; ++i) {
    out.low_confidence[i] = out.row_exits[i] < kMinRowExits;
    if (out.row_exits[i] == 0) continue;
    for (std::size_t j = 0; j < states; ++j) {
      out.frequencies(i, j) =
          out.counts(i, j) / static_cast<double>(out.row_exits[i]);
    }
  }
  return out;
}

ReturnTimeHistogram empirical_return_times(const EpisodeConfig& cfg,
                                           std::size_t num_returns,
                                           std::size_t max_steps) {
  validate(cfg);
  if (transition_matrix(cfg.channel, cfg.horizon).no_return()) {
    throw PreconditionError(
        "empirical_return_times: the empty-buffer state is never re-entered "
        "(q * sum_{l<N} p_l = 1)");
  }
  if (max_steps == 0) max_steps = 1000 * num_returns + 10000;

  ReturnTimeHistogram hist;
  BufferLengthProcess process(cfg.channel, cfg.horizon, cfg.seed);
  process.advance();  // lambda(0) = 0 opens the skipped first cycle
  std::optional<std::size_t> cycle_start;
  while (hist.returns < num_returns && process.time() < max_steps) {
    const std::size_t k = process.time();
    if (process.advance() != 0) continue;
    if (cycle_start) {
      const std::size_t delta = k - *cycle_start;
      if (hist.counts.size() < delta) hist.counts.resize(delta, 0);
      ++hist.counts[delta - 1];
      ++hist.returns;
    }
    cycle_start = k;
  }
  hist.steps_simulated = process.time();
  hist.partial = hist.returns < num_returns;
  return hist;
}

double ks_distance(const ReturnTimeHistogram& empirical,
                   const ReturnTimeDistribution& model) {
  if (empirical.returns == 0) return 1.0;
  const std::size_t support = std::max(empirical.counts.size(), model.pmf.size());
  double emp_cdf = 0.0;
  double model_cdf = 0.0;
  double distance = 0.0;
  for (std::size_t j = 1; j <= support; ++j) {
    if (j <= empirical.counts.size()) {
      emp_cdf += static_cast<double>(empirical.counts[j - 1]) /
                 static_cast<double>(empirical.returns);
    }
    model_cdf += model.probability(j);
    distance = std::max(distance, std::abs(emp_cdf - model_cdf));
  }
  return distance;
}

std::vector<std::size_t> empty_buffer_instants(const SimulationTrace& trace) {
  std::vector<std::size_t> out;
  for (const TraceRow& row : trace.rows) {
    if (row.lambda == 0) out.push_back(row.k);
  }
  return out;
}

DriftEstimate empirical_drift(const EpisodeConfig& cfg, std::size_t num_cycles) {
  validate(cfg);
  DriftEstimate est;
  const MarkovChainModel chain = transition_matrix(cfg.channel, cfg.horizon);
  const LyapunovCertificate& cert = cfg.plant.certificate;
  est.omega = omega(chain, cert.rho);
  est.bound = cert.alpha * est.omega;
  if (chain.no_return() || num_cycles == 0) return est;
  est.applicable = true;

  std::vector<double> start_values;
  std::vector<double> end_values;
  const std::size_t max_episodes = 100 * num_cycles + 1000;
  EpisodeConfig local = cfg;
  while (start_values.size() < num_cycles && est.episodes < max_episodes) {
    local.seed = derive_seed(cfg.seed, est.episodes++);
    // Cycles are selected by start time only (k_i < cfg.steps); the episode
    // is then extended with the same seed until every selected cycle has
    // ended. Keeping only cycles that happen to end inside a fixed window
    // would favour short cycles.
    std::size_t extension = kDriftInitialExtension;
    while (true) {
      local.steps = cfg.steps + extension;
      const SimulationTrace trace = run_episode(local);
      const std::vector<std::size_t> zeros = empty_buffer_instants(trace);
      std::size_t selected = 0;
      while (selected + 1 < zeros.size() && zeros[selected + 1] < cfg.steps) ++selected;
      const bool complete = selected == 0 || selected + 1 < zeros.size();
      const bool truncated = !complete && !trace.diverged;
      if (truncated && extension < kDriftMaxExtension) {
        extension *= 2;
        continue;
      }
      // zeros[0] = 0 opens the skipped initial cycle.
      for (std::size_t i = 1; i <= selected && i + 1 < zeros.size(); ++i) {
        start_values.push_back(cert.value(trace.rows[zeros[i]].x));
        end_values.push_back(cert.value(trace.rows[zeros[i + 1]].x));
      }
      if (truncated) ++est.truncated_cycles;
      break;
    }
  }

  est.cycles = start_values.size();
  if (est.cycles < 2) {
    est.applicable = false;
    return est;
  }
  CompensatedSum start_sum;
  CompensatedSum end_sum;
  for (std::size_t i = 0; i < est.cycles; ++i) {
    start_sum.add(start_values[i]);
    end_sum.add(end_values[i]);
  }
  if (start_sum.value() == 0.0) {
    est.applicable = false;
    return est;
  }
  est.ratio = end_sum.value() / start_sum.value();

  // Delta method for a ratio of means.
  const double n = static_cast<double>(est.cycles);
  CompensatedSum residual_sq;
  for (std::size_t i = 0; i < est.cycles; ++i) {
    const double r = end_values[i] - est.ratio * start_values[i];
    residual_sq.add(r * r);
  }
  const double mean_start = start_sum.value() / n;
  est.standard_error = std::sqrt(residual_sq.value() / (n * (n - 1.0))) / mean_start;
  return est;
}

DecayProfile cycle_decay_profile(const EpisodeConfig& cfg,
                                 std::size_t num_episodes,
                                 std::size_t num_cycles) {
  validate(cfg);
  DecayProfile profile;
  std::vector<CompensatedSum> sums(num_cycles + 1);
  EpisodeConfig local = cfg;
  for (std::size_t e = 0; e < num_episodes; ++e) {
    local.seed = derive_seed(cfg.seed, e);
    const SimulationTrace trace = run_episode(local);
    const std::vector<std::size_t> zeros = empty_buffer_instants(trace);
    if (zeros.size() < num_cycles + 1) continue;
    for (std::size_t i = 0; i <= num_cycles; ++i) {
      sums[i].add(cfg.plant.certificate.value(trace.rows[zeros[i]].x));
    }
    ++profile.episodes_used;
  }
  profile.mean_value.resize(num_cycles + 1, 0.0);
  if (profile.episodes_used == 0) return profile;
  for (std::size_t i = 0; i <= num_cycles; ++i) {
    profile.mean_value[i] =
        sums[i].value() / static_cast<double>(profile.episodes_used);
  }
  return profile;
}

NominalConsistency nominal_consistency(const SimulationTrace& trace,
                                       const PlantBundle& plant) {
  NominalConsistency out;
  std::vector<bool> deviated(trace.rows.size(), false);
  for (std::size_t k = 0; k < trace.rows.size(); ++k) {
    const TraceRow& row = trace.rows[k];
    const bool nominal = plant.law.kappa(row.x) == row.u;
    deviated[k] = !nominal;
    if (row.lambda == 0) continue;

    ++out.active_steps;
    if (nominal) {
      ++out.matching;
      continue;
    }
    const std::size_t origin = row.active_origin.value();
    const bool explained =
        std::any_of(deviated.begin() + static_cast<std::ptrdiff_t>(origin),
                    deviated.begin() + static_cast<std::ptrdiff_t>(k),
                    [](bool d) { return d; });
    if (explained) {
      ++out.explained_mismatches;
    } else {
      ++out.unexplained_mismatches;
    }
  }
  return out;
}

}  // namespace sbc
