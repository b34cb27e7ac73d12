#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sbc {

using Vector = std::vector<double>;
using VectorView = std::span<const double>;

// Tentative input sequence u(k;k), ..., u(k+N-1;k), stored as N stacked
// p-vectors.
class InputSequence {
 public:
  InputSequence() = default;
  InputSequence(std::size_t input_dim, std::vector<double> stacked);

  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t horizon() const noexcept {
    return input_dim_ == 0 ? 0 : values_.size() / input_dim_;
  }

  // Entry j, i.e. the input intended for (origin time + j).
  VectorView at(std::size_t j) const;
  VectorView stacked() const noexcept { return values_; }

  bool operator==(const InputSequence&) const = default;

 private:
  std::size_t input_dim_ = 0;
  std::vector<double> values_;
};

// Discrete-time plant x(k+1) = f(x(k), u(k)) with constrained input u in U.
struct PlantModel {
  std::size_t state_dim = 0;
  std::size_t input_dim = 0;
  std::function<Vector(VectorView x, VectorView u)> dynamics;
  std::function<bool(VectorView u)> admissible;
  std::function<Vector(VectorView u)> project;
};

// Nominally stabilizing state feedback kappa: R^n -> U.
struct ControlLaw {
  std::function<Vector(VectorView x)> kappa;
};

// V with class-K_inf sandwich bounds phi1(|x|) <= V(x) <= phi2(|x|),
// nominal contraction V(f(x, kappa(x))) <= rho V(x) and open-loop growth
// V(f(x, 0)) <= alpha V(x).
struct LyapunovCertificate {
  std::function<double(VectorView x)> value;
  std::function<double(double)> lower_bound;
  std::function<double(double)> upper_bound;
  double rho = 0.0;
  double alpha = 0.0;
};

struct PlantBundle {
  std::string name;
  PlantModel model;
  ControlLaw law;
  LyapunovCertificate certificate;
};

// f(x, u). Throws InvalidArgument on dimension mismatch and
// ConstraintViolation when u is not admissible.
Vector step(const PlantModel& plant, VectorView x, VectorView u);

// Applies kappa to nominal predictions x(k+j;k), starting from x(k;k) = x,
// and returns the N tentative inputs. Uses N-1 dynamics evaluations.
InputSequence rollout_sequence(const PlantModel& plant, const ControlLaw& law,
                               VectorView x, std::size_t horizon);

struct CertificateReport {
  std::size_t evaluated = 0;
  std::size_t skipped_at_origin = 0;
  double max_contraction_ratio = 0.0;  // max V(f(x,kappa(x))) / V(x)
  double max_open_loop_ratio = 0.0;    // max V(f(x,0)) / V(x)
  std::size_t rho_violations = 0;
  std::size_t alpha_violations = 0;
  std::size_t sandwich_violations = 0;

  std::size_t total_violations() const noexcept {
    return rho_violations + alpha_violations + sandwich_violations;
  }
};

using StateSampler = std::function<Vector()>;

// Sampled check of the certificate inequalities. Draws with V(x) = 0 are
// skipped. A violation is any inequality exceeded by more than `tolerance`.
CertificateReport check_certificate(const PlantModel& plant,
                                    const ControlLaw& law,
                                    const LyapunovCertificate& certificate,
                                    const StateSampler& sampler,
                                    std::size_t num_samples,
                                    double tolerance = 1e-12);

double euclidean_norm(VectorView x);

// Clamp to [-1, 1].
double saturate(double mu);

// x1+ = x2 + u1, x2+ = -sat(x1 + x2) + u2 with U = R x [-0.8, 0.8],
// kappa(x) = (-x2, 0.8 sat(x1 + x2)), V(x) = 2|x|, rho = 1/2, alpha = 1.618.
PlantBundle saturating_example();

inline constexpr std::string_view kSaturatingExampleName = "saturating2d";

// Built-in plant lookup by name; throws InvalidArgument for unknown names.
PlantBundle make_plant(std::string_view name);
std::vector<std::string> plant_names();

}  // namespace sbc
