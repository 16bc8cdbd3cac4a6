#ifndef ROBEAM_PROBLEM_HPP
#define ROBEAM_PROBLEM_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "robeam/array_model.hpp"

namespace robeam {

/// Main-lobe direction and the sampled side-lobe region, both in degrees.
struct AngleGrid {
  double mainlobe = 90.0;
  std::vector<double> sidelobe_angles;

  Index num_sidelobes() const { return static_cast<Index>(sidelobe_angles.size()); }

  void validate() const {
    auto in_range = [](double a) { return a >= 0.0 && a <= 180.0; };
    if (sidelobe_angles.empty()) throw DomainError("side-lobe grid is empty");
    if (!in_range(mainlobe)) throw DomainError("main-lobe angle must lie in [0, 180] degrees");
    for (double a : sidelobe_angles) {
      if (!in_range(a)) throw DomainError("side-lobe angle must lie in [0, 180] degrees");
      if (a == mainlobe) throw DomainError("main-lobe angle appears in the side-lobe grid");
    }
  }
};

/// Inclusive angle range [start, stop] sampled every `step` degrees.
struct AngleRange {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  friend bool operator==(const AngleRange&, const AngleRange&) = default;
};

/// Expands the ranges in order and drops repeated angles, keeping first occurrences.
/// Sample k of a range is start + k*step rounded to 1e-9 degrees, so that
/// accumulated floating error never splits one physical angle into two.
inline AngleGrid grid_from_spec(double mainlobe_deg, const std::vector<AngleRange>& ranges) {
  AngleGrid grid;
  grid.mainlobe = mainlobe_deg;
  for (const auto& r : ranges) {
    if (!(r.step > 0.0)) throw DomainError("angle step must be positive");
    if (r.stop < r.start) throw DomainError("angle range stop precedes start");
    if (mainlobe_deg >= r.start && mainlobe_deg <= r.stop)
      throw DomainError("main-lobe angle lies inside a side-lobe range");
    const auto count = static_cast<long long>(std::floor((r.stop - r.start) / r.step + 1e-9)) + 1;
    for (long long k = 0; k < count; ++k) {
      const double angle = std::round((r.start + double(k) * r.step) * 1e9) / 1e9;
      if (std::find(grid.sidelobe_angles.begin(), grid.sidelobe_angles.end(), angle) == grid.sidelobe_angles.end())
        grid.sidelobe_angles.push_back(angle);
    }
  }
  grid.validate();
  return grid;
}

/// All data of the robust min-max SOCP: presumed steering vectors and disk radii.
template <typename Scalar = double>
struct ProblemInstance {
  SteeringVector<Scalar> mainlobe_sv;
  ComplexMatrix<Scalar> sidelobe_svs;  // N x M, column m is the steering vector at side-lobe angle m
  DiskRadii<Scalar> radii;

  Index num_elements() const { return mainlobe_sv.size(); }
  Index num_sidelobes() const { return sidelobe_svs.cols(); }

  void validate() const {
    const Index n = num_elements();
    if (n < 1) throw ConstructionError("instance has no array elements");
    if (sidelobe_svs.rows() != n) throw ConstructionError("side-lobe steering vectors differ in length from the main lobe");
    if (radii.size() != n) throw ConstructionError("disk radii length does not match the array size");
  }

  /// N x (M+1) matrix with the main-lobe vector in column 0.
  ComplexMatrix<Scalar> stacked_steering() const {
    ComplexMatrix<Scalar> all(num_elements(), num_sidelobes() + 1);
    all.col(0) = mainlobe_sv;
    all.rightCols(num_sidelobes()) = sidelobe_svs;
    return all;
  }
};

template <typename Scalar = double>
ProblemInstance<Scalar> build_instance(const ArrayGeometry& geometry, const AngleGrid& grid,
                                       const DiskRadii<Scalar>& radii) {
  geometry.validate();
  grid.validate();
  if (radii.size() != geometry.num_elements)
    throw ConstructionError("disk radii length does not match the array size");
  ProblemInstance<Scalar> instance;
  instance.mainlobe_sv = presumed_steering<Scalar>(geometry, deg_to_rad(Scalar(grid.mainlobe)));
  instance.sidelobe_svs.resize(geometry.num_elements, grid.num_sidelobes());
  for (Index m = 0; m < grid.num_sidelobes(); ++m)
    instance.sidelobe_svs.col(m) = presumed_steering<Scalar>(geometry, deg_to_rad(Scalar(grid.sidelobe_angles[m])));
  instance.radii = radii;
  return instance;
}

}  // namespace robeam

#endif  // ROBEAM_PROBLEM_HPP
