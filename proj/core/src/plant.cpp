#include "sbc/plant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sbc/error.hpp"

namespace sbc {

InputSequence::InputSequence(std::size_t input_dim, std::vector<double> stacked)
    : input_dim_(input_dim), values_(std::move(stacked)) {
  if (input_dim_ == 0) {
    throw InvalidArgument("InputSequence: input dimension must be positive");
  }
  if (values_.size() % input_dim_ != 0) {
    throw InvalidArgument("InputSequence: stacked length " +
                          std::to_string(values_.size()) +
                          " is not a multiple of input dimension " +
                          std::to_string(input_dim_));
  }
}

VectorView InputSequence::at(std::size_t j) const {
  if (j >= horizon()) {
    throw InvalidArgument("InputSequence::at: index " + std::to_string(j) +
                          " outside horizon " + std::to_string(horizon()));
  }
  return VectorView(values_).subspan(j * input_dim_, input_dim_);
}

Vector step(const PlantModel& plant, VectorView x, VectorView u) {
  if (x.size() != plant.state_dim || u.size() != plant.input_dim) {
    throw InvalidArgument("step: expected state/input dimensions (" +
                          std::to_string(plant.state_dim) + ", " +
                          std::to_string(plant.input_dim) + "), got (" +
                          std::to_string(x.size()) + ", " +
                          std::to_string(u.size()) + ")");
  }
  if (!plant.admissible(u)) {
    throw ConstraintViolation("step: input outside the admissible set");
  }
  return plant.dynamics(x, u);
}

InputSequence rollout_sequence(const PlantModel& plant, const ControlLaw& law,
                               VectorView x, std::size_t horizon) {
  if (horizon == 0) {
    throw InvalidArgument("rollout_sequence: horizon must be at least 1");
  }
  if (x.size() != plant.state_dim) {
    throw InvalidArgument("rollout_sequence: state dimension mismatch");
  }
  std::vector<double> stacked;
  stacked.reserve(horizon * plant.input_dim);

  Vector predicted(x.begin(), x.end());
  for (std::size_t j = 0; j < horizon; ++j) {
    const Vector u = law.kappa(predicted);
    stacked.insert(stacked.end(), u.begin(), u.end());
    if (j + 1 < horizon) predicted = step(plant, predicted, u);
  }
  return InputSequence(plant.input_dim, std::move(stacked));
}

CertificateReport check_certificate(const PlantModel& plant,
                                    const ControlLaw& law,
                                    const LyapunovCertificate& certificate,
                                    const StateSampler& sampler,
                                    std::size_t num_samples, double tolerance) {
  CertificateReport report;
  const Vector zero_input(plant.input_dim, 0.0);
  for (std::size_t i = 0; i < num_samples; ++i) {
    const Vector x = sampler();
    const double v = certificate.value(x);
    if (v == 0.0) {
      ++report.skipped_at_origin;
      continue;
    }
    ++report.evaluated;

    const double norm = euclidean_norm(x);
    if (certificate.lower_bound(norm) > v + tolerance ||
        v > certificate.upper_bound(norm) + tolerance) {
      ++report.sandwich_violations;
    }

    const double v_closed = certificate.value(step(plant, x, law.kappa(x)));
    const double v_open = certificate.value(step(plant, x, zero_input));
    report.max_contraction_ratio =
        std::max(report.max_contraction_ratio, v_closed / v);
    report.max_open_loop_ratio = std::max(report.max_open_loop_ratio, v_open / v);
    if (v_closed > certificate.rho * v + tolerance) ++report.rho_violations;
    if (v_open > certificate.alpha * v + tolerance) ++report.alpha_violations;
  }
  return report;
}

double euclidean_norm(VectorView x) {
  double sum = 0.0;
  for (const double xi : x) sum += xi * xi;
  return std::sqrt(sum);
}

double saturate(double mu) { return std::clamp(mu, -1.0, 1.0); }

namespace {
constexpr double kInputBound = 0.8;
}  // namespace

PlantBundle saturating_example() {
  PlantModel model;
  model.state_dim = 2;
  model.input_dim = 2;
  model.dynamics = [](VectorView x, VectorView u) {
    return Vector{x[1] + u[0], -saturate(x[0] + x[1]) + u[1]};
  };
  model.admissible = [](VectorView u) {
    return std::isfinite(u[0]) && std::abs(u[1]) <= kInputBound;
  };
  model.project = [](VectorView u) {
    return Vector{u[0], std::clamp(u[1], -kInputBound, kInputBound)};
  };

  ControlLaw law;
  law.kappa = [](VectorView x) {
    return Vector{-x[1], kInputBound * saturate(x[0] + x[1])};
  };

  LyapunovCertificate certificate;
  certificate.value = [](VectorView x) { return 2.0 * euclidean_norm(x); };
  certificate.lower_bound = [](double s) { return 2.0 * s; };
  certificate.upper_bound = [](double s) { return 2.0 * s; };
  certificate.rho = 0.5;
  certificate.alpha = 1.618;

  return PlantBundle{std::string(kSaturatingExampleName), std::move(model),
                     std::move(law), std::move(certificate)};
}

PlantBundle make_plant(std::string_view name) {
  if (name == kSaturatingExampleName) return saturating_example();
  throw InvalidArgument("unknown plant '" + std::string(name) + "'");
}

std::vector<std::string> plant_names() {
  return {std::string(kSaturatingExampleName)};
}

}  // namespace sbc
