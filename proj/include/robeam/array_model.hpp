#ifndef ROBEAM_ARRAY_MODEL_HPP
#define ROBEAM_ARRAY_MODEL_HPP

#include <cmath>
#include <numbers>

#include "robeam/core.hpp"

namespace robeam {

/// Uniform linear array: element count and inter-element spacing in wavelengths.
struct ArrayGeometry {
  Index num_elements = 1;
  double element_spacing = 0.5;

  ArrayGeometry() = default;
  explicit ArrayGeometry(Index n, double spacing = 0.5) : num_elements(n), element_spacing(spacing) {
    validate();
  }

  void validate() const {
    if (num_elements < 1) throw DomainError("array needs at least one element");
    if (!(element_spacing > 0.0) || !std::isfinite(element_spacing))
      throw DomainError("element spacing must be positive");
  }

  friend bool operator==(const ArrayGeometry&, const ArrayGeometry&) = default;
};

/// Presumed far-field steering vector of a ULA; entry n has phase
/// 2*pi*spacing*cos(angle)*n for n = 0..N-1 and unit magnitude.
template <typename Scalar = double>
SteeringVector<Scalar> presumed_steering(const ArrayGeometry& geometry, Scalar angle) {
  geometry.validate();
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  constexpr Scalar slack = Scalar(1e-12);
  if (!(angle >= -slack && angle <= pi + slack))
    throw DomainError("steering angle must lie in [0, pi] radians");
  const Scalar phase_step = Scalar(2) * pi * Scalar(geometry.element_spacing) * std::cos(angle);
  SteeringVector<Scalar> sv(geometry.num_elements);
  for (Index n = 0; n < geometry.num_elements; ++n) sv(n) = std::polar(Scalar(1), phase_step * Scalar(n));
  return sv;
}

/// Per-element amplitude bounds U_n (fractional) and phase bounds Phi_n (radians).
template <typename Scalar = double>
struct UncertaintyModel {
  RealVector<Scalar> amp_bounds;
  RealVector<Scalar> phase_bounds;

  UncertaintyModel() = default;
  UncertaintyModel(RealVector<Scalar> amp, RealVector<Scalar> phase)
      : amp_bounds(std::move(amp)), phase_bounds(std::move(phase)) {
    validate();
  }

  static UncertaintyModel uniform(Index n, Scalar amp, Scalar phase) {
    return UncertaintyModel(RealVector<Scalar>::Constant(n, amp), RealVector<Scalar>::Constant(n, phase));
  }

  Index size() const { return amp_bounds.size(); }

  void validate() const {
    if (amp_bounds.size() != phase_bounds.size())
      throw ConstructionError("amplitude and phase bound vectors differ in length");
    for (Index n = 0; n < amp_bounds.size(); ++n) {
      if (!(amp_bounds(n) >= Scalar(0) && amp_bounds(n) < Scalar(1)))
        throw DomainError("amplitude bound must lie in [0, 1)");
      if (!(phase_bounds(n) >= Scalar(0) && phase_bounds(n) < std::numbers::pi_v<Scalar> / Scalar(2)))
        throw DomainError("phase bound must lie in [0, pi/2)");
    }
  }
};

/// Radii delta_n of the element-wise disk set that contains the fan-shaped set.
template <typename Scalar = double>
struct DiskRadii {
  RealVector<Scalar> delta;

  DiskRadii() = default;
  explicit DiskRadii(RealVector<Scalar> d) : delta(std::move(d)) {
    for (Index n = 0; n < delta.size(); ++n)
      if (!(delta(n) >= Scalar(0)) || !std::isfinite(delta(n))) throw DomainError("disk radius must be nonnegative");
  }

  static DiskRadii constant(Index n, Scalar value) { return DiskRadii(RealVector<Scalar>::Constant(n, value)); }
  static DiskRadii zero(Index n) { return constant(n, Scalar(0)); }

  Index size() const { return delta.size(); }

  /// Radius of the l2 ball that the disk set is inscribed in: (sum delta_n^2)^(1/2).
  Scalar sphere_radius() const { return delta.norm(); }
};

/// delta = sqrt(U^2 + 2 (1+U)(1 - cos Phi)), with 1 - cos Phi = 2 sin^2(Phi/2)
/// so that tiny perturbations do not cancel.
template <typename Scalar>
Scalar disk_radius(Scalar amp, Scalar phase) {
  const Scalar half_sin = std::sin(phase / Scalar(2));
  return std::sqrt(amp * amp + Scalar(4) * (Scalar(1) + amp) * half_sin * half_sin);
}

template <typename Scalar>
DiskRadii<Scalar> disk_radii(const UncertaintyModel<Scalar>& model) {
  model.validate();
  RealVector<Scalar> delta(model.size());
  for (Index n = 0; n < model.size(); ++n) delta(n) = disk_radius(model.amp_bounds(n), model.phase_bounds(n));
  return DiskRadii<Scalar>(std::move(delta));
}

/// One realization of the amplitude/phase perturbation, per element.
template <typename Scalar = double>
struct PerturbationDraw {
  RealVector<Scalar> amp;
  RealVector<Scalar> phase;
};

/// a_n = (1 + du_n) exp(j dphi_n) ahat_n. Throws if the draw leaves the model's bounds.
template <typename Scalar>
SteeringVector<Scalar> sample_fan(const SteeringVector<Scalar>& presumed, const UncertaintyModel<Scalar>& model,
                                  const PerturbationDraw<Scalar>& draw) {
  const Index n_el = presumed.size();
  if (model.size() != n_el || draw.amp.size() != n_el || draw.phase.size() != n_el)
    throw ConstructionError("perturbation draw does not match the array size");
  SteeringVector<Scalar> actual(n_el);
  for (Index n = 0; n < n_el; ++n) {
    if (!(std::abs(draw.amp(n)) <= model.amp_bounds(n)) || !(std::abs(draw.phase(n)) <= model.phase_bounds(n)))
      throw DomainError("perturbation draw exceeds the uncertainty bounds");
    actual(n) = (Scalar(1) + draw.amp(n)) * std::polar(Scalar(1), draw.phase(n)) * presumed(n);
  }
  return actual;
}

/// Uniform draw over [-U_n, U_n] x [-Phi_n, Phi_n].
template <typename Scalar>
PerturbationDraw<Scalar> uniform_draw(const UncertaintyModel<Scalar>& model, Rng& rng) {
  PerturbationDraw<Scalar> draw{RealVector<Scalar>(model.size()), RealVector<Scalar>(model.size())};
  for (Index n = 0; n < model.size(); ++n) {
    draw.amp(n) = Scalar(rng.uniform(-double(model.amp_bounds(n)), double(model.amp_bounds(n))));
    draw.phase(n) = Scalar(rng.uniform(-double(model.phase_bounds(n)), double(model.phase_bounds(n))));
  }
  return draw;
}

/// The corner du_n = U_n, dphi_n = Phi_n, which lands on the disk boundary.
template <typename Scalar>
PerturbationDraw<Scalar> boundary_draw(const UncertaintyModel<Scalar>& model) {
  return {model.amp_bounds, model.phase_bounds};
}

/// Bounds drawn uniformly from [0, u_max] x [0, phi_max] (phi_max in radians).
template <typename Scalar = double>
UncertaintyModel<Scalar> random_uncertainty(Index n, Scalar u_max, Scalar phi_max, std::uint64_t seed) {
  if (n < 1) throw DomainError("element count must be positive");
  if (!(u_max >= Scalar(0) && u_max < Scalar(1))) throw DomainError("u_max must lie in [0, 1)");
  if (!(phi_max >= Scalar(0) && phi_max < std::numbers::pi_v<Scalar> / Scalar(2)))
    throw DomainError("phi_max must lie in [0, pi/2)");
  Rng rng(seed);
  RealVector<Scalar> amp(n), phase(n);
  for (Index k = 0; k < n; ++k) {
    amp(k) = Scalar(rng.uniform(0.0, double(u_max)));
    phase(k) = Scalar(rng.uniform(0.0, double(phi_max)));
  }
  return UncertaintyModel<Scalar>(std::move(amp), std::move(phase));
}

}  // namespace robeam

#endif  // ROBEAM_ARRAY_MODEL_HPP
