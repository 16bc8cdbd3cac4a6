#ifndef ROBEAM_PATTERN_HPP
#define ROBEAM_PATTERN_HPP

#include <cmath>
#include <limits>
#include <vector>

#include "robeam/problem.hpp"

namespace robeam {

template <typename Scalar>
Scalar to_db(Scalar magnitude) {
  return Scalar(20) * std::log10(magnitude);
}

template <typename Scalar>
Scalar from_db(Scalar db) {
  return std::pow(Scalar(10), db / Scalar(20));
}

/// |w^H a|
template <typename Scalar>
Scalar nominal_response(const Beamformer<Scalar>& w, const SteeringVector<Scalar>& sv) {
  if (w.size() != sv.size()) throw ConstructionError("beamformer and steering vector differ in length");
  return std::abs(response(w, sv));
}

/// Exact maximum of |w^H a| over the disk set |a_n - ahat_n| <= delta_n:
/// |w^H ahat| + sum_n delta_n |w_n|.
template <typename Scalar>
Scalar worst_case_elementwise(const Beamformer<Scalar>& w, const SteeringVector<Scalar>& sv,
                              const DiskRadii<Scalar>& radii) {
  if (radii.size() != w.size()) throw ConstructionError("disk radii length does not match the beamformer");
  return nominal_response(w, sv) + radii.delta.dot(w.cwiseAbs());
}

/// Exact maximum of |w^H a| over the ball ||a - ahat||_2 <= epsilon: |w^H ahat| + epsilon ||w||_2.
template <typename Scalar>
Scalar worst_case_sphere(const Beamformer<Scalar>& w, const SteeringVector<Scalar>& sv, Scalar epsilon) {
  if (!(epsilon >= Scalar(0))) throw DomainError("sphere radius must be nonnegative");
  return nominal_response(w, sv) + epsilon * w.norm();
}

/// Minimum of |w^H a| over the disk set around the main-lobe vector after
/// rotating w so that w^H ahat is real and nonnegative: |w^H ahat| - sum_n delta_n |w_n|.
/// The robust main-lobe constraint holds iff this is >= 1.
template <typename Scalar>
Scalar mainlobe_worst_min(const Beamformer<Scalar>& w, const SteeringVector<Scalar>& sv,
                          const DiskRadii<Scalar>& radii) {
  if (radii.size() != w.size()) throw ConstructionError("disk radii length does not match the beamformer");
  return nominal_response(w, sv) - radii.delta.dot(w.cwiseAbs());
}

template <typename Scalar = double>
struct PatternSample {
  double angle = 0.0;  // degrees
  Scalar nominal = Scalar(0);
  Scalar worst_elementwise = Scalar(0);
  Scalar worst_sphere = Scalar(0);
};

template <typename Scalar = double>
struct SidelobeSummary {
  Scalar peak_worst_case_db = Scalar(0);
  double peak_angle = 0.0;
  Scalar mainlobe_worst_min = Scalar(0);
};

template <typename Scalar = double>
struct PatternSweep {
  std::vector<PatternSample<Scalar>> samples;
  SidelobeSummary<Scalar> summary;
};

/// Evaluates the pattern over the side-lobe grid. The sphere column uses
/// epsilon = ||delta||_2. The summary peak is the largest element-wise worst
/// case in dB, first angle on ties.
template <typename Scalar>
PatternSweep<Scalar> sweep(const Beamformer<Scalar>& w, const ArrayGeometry& geometry, const AngleGrid& grid,
                           const DiskRadii<Scalar>& radii) {
  grid.validate();
  const Scalar eps = radii.sphere_radius();
  const Scalar l1 = radii.delta.dot(w.cwiseAbs());
  const Scalar l2 = eps * w.norm();

  PatternSweep<Scalar> out;
  out.samples.reserve(grid.sidelobe_angles.size());
  Scalar peak = -std::numeric_limits<Scalar>::infinity();
  for (double angle : grid.sidelobe_angles) {
    const auto sv = presumed_steering<Scalar>(geometry, deg_to_rad(Scalar(angle)));
    const Scalar nominal = nominal_response(w, sv);
    PatternSample<Scalar> s{angle, nominal, nominal + l1, nominal + l2};
    if (s.worst_elementwise > peak) {
      peak = s.worst_elementwise;
      out.summary.peak_angle = angle;
    }
    out.samples.push_back(s);
  }
  out.summary.peak_worst_case_db = to_db(peak);
  out.summary.mainlobe_worst_min =
      mainlobe_worst_min(w, presumed_steering<Scalar>(geometry, deg_to_rad(Scalar(grid.mainlobe))), radii);
  return out;
}

/// Worst-case side-lobe level relative to the worst-case main-lobe gain, in dB:
/// 20 log10( max_m (|w^H a_m| + sum delta |w|) / (|w^H a_0| - sum delta |w|) ).
/// Invariant to positive scaling of w; +inf when the main lobe can be nulled.
template <typename Scalar>
Scalar relative_worst_sidelobe_db(const Beamformer<Scalar>& w, const ProblemInstance<Scalar>& instance,
                                  const DiskRadii<Scalar>& eval_radii) {
  const Scalar l1 = eval_radii.delta.dot(w.cwiseAbs());
  const Scalar peak = (instance.sidelobe_svs.adjoint() * w).cwiseAbs().maxCoeff() + l1;
  const Scalar main = mainlobe_worst_min(w, instance.mainlobe_sv, eval_radii);
  if (!(main > Scalar(0))) return std::numeric_limits<Scalar>::infinity();
  return to_db(peak / main);
}

}  // namespace robeam

#endif  // ROBEAM_PATTERN_HPP
