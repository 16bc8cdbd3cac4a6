#ifndef ROBEAM_TESTS_SUPPORT_HPP
#define ROBEAM_TESTS_SUPPORT_HPP

// Independent reference computations shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <vector>

#include "robeam/admm.hpp"
#include "robeam/array_model.hpp"
#include "robeam/problem.hpp"
#include "robeam/prox.hpp"

namespace robeam::testing {

/// Random desk-scale instance: main lobe in [40, 140] degrees, M side-lobe
/// angles drawn at least 8 degrees away from it, radii uniform in [0, delta_max].
inline ProblemInstance<double> random_instance(Rng& rng, Index n, Index m, double delta_max) {
  ArrayGeometry geometry(n);
  AngleGrid grid;
  grid.mainlobe = std::round(rng.uniform(40.0, 140.0) * 1e6) / 1e6;
  while (grid.num_sidelobes() < m) {
    const double angle = std::round(rng.uniform(0.0, 180.0) * 1e6) / 1e6;
    if (std::abs(angle - grid.mainlobe) < 8.0) continue;
    if (std::find(grid.sidelobe_angles.begin(), grid.sidelobe_angles.end(), angle) != grid.sidelobe_angles.end())
      continue;
    grid.sidelobe_angles.push_back(angle);
  }
  RealVector<double> delta(n);
  for (Index k = 0; k < n; ++k) delta(k) = rng.uniform(0.0, delta_max);
  return build_instance(geometry, grid, DiskRadii<double>(delta));
}

inline ComplexVector<double> random_complex(Rng& rng, Index size, double scale) {
  ComplexVector<double> z(size);
  for (Index k = 0; k < size; ++k) z(k) = Complex<double>(rng.uniform(-scale, scale), rng.uniform(-scale, scale));
  return z;
}

/// Side-lobe prox value at fixed t once x is projected: t + rho/2 sum (|c_m| - t)_+^2.
inline double sidelobe_value_at(const ComplexVector<double>& c, double rho, double t) {
  double s = 0.0;
  for (Index m = 0; m < c.size(); ++m) {
    const double gap = std::max(std::abs(c(m)) - t, 0.0);
    s += gap * gap;
  }
  return t + 0.5 * rho * s;
}

/// Minimum of the side-lobe prox objective by a 1e-4 grid over t in [0, max |c|]
/// refined by golden-section search around the best grid point. The function is
/// convex in t, so the refinement converges to the global minimum.
inline double sidelobe_brute_force(const ComplexVector<double>& c, double rho) {
  const double top = c.size() ? c.cwiseAbs().maxCoeff() : 0.0;
  const double step = 1e-4;
  double best_t = 0.0, best = sidelobe_value_at(c, rho, 0.0);
  for (double t = step; t <= top + step; t += step) {
    const double v = sidelobe_value_at(c, rho, t);
    if (v < best) best = v, best_t = t;
  }
  double lo = std::max(0.0, best_t - step), hi = best_t + step;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    if (sidelobe_value_at(c, rho, a) <= sidelobe_value_at(c, rho, b))
      hi = b;
    else
      lo = a;
  }
  return std::min(best, sidelobe_value_at(c, rho, 0.5 * (lo + hi)));
}

struct MainlobeReference {
  double xi = 0.0;
  double x0 = 0.0;
  ComplexVector<double> v;
  double objective = 0.0;
};

/// Main-lobe prox by bisection on the multiplier: the constraint slack
/// h(xi) = x0(xi) - sum delta_n y_n(xi) - 1 is nondecreasing in xi, with
/// x0 = -Re c0 + xi/2 and y_n = (|d_n| - delta_n/rho - xi delta_n/2)_+.
inline MainlobeReference mainlobe_bisection(const Complex<double>& c0, const ComplexVector<double>& d,
                                            const RealVector<double>& delta, double rho) {
  auto magnitude = [&](Index n, double xi) {
    if (delta(n) == 0.0) return std::abs(d(n));
    return std::max(std::abs(d(n)) - delta(n) / rho - xi * delta(n) / 2.0, 0.0);
  };
  auto slack = [&](double xi) {
    double s = -c0.real() + xi / 2.0 - 1.0;
    for (Index n = 0; n < d.size(); ++n)
      if (delta(n) > 0.0) s -= delta(n) * magnitude(n, xi);
    return s;
  };
  MainlobeReference ref;
  if (slack(0.0) < 0.0) {
    double lo = 0.0, hi = 1.0;
    while (slack(hi) < 0.0) hi *= 2.0;
    for (int it = 0; it < 300; ++it) {
      const double mid = 0.5 * (lo + hi);
      (slack(mid) < 0.0 ? lo : hi) = mid;
    }
    ref.xi = hi;
  }
  ref.x0 = -c0.real() + ref.xi / 2.0;
  ref.v = ComplexVector<double>::Zero(d.size());
  for (Index n = 0; n < d.size(); ++n)
    if (std::abs(d(n)) > 0.0) ref.v(n) = -d(n) / std::abs(d(n)) * magnitude(n, ref.xi);
  double obj = 0.0;
  for (Index n = 0; n < d.size(); ++n) obj += delta(n) * std::abs(ref.v(n)) + 0.5 * rho * std::norm(ref.v(n) + d(n));
  ref.objective = obj + 0.5 * rho * std::norm(Complex<double>(ref.x0) + c0);
  return ref;
}

/// Problem constraints at a candidate (w, t), as in the robust SOCP.
struct FeasibilityGaps {
  double sidelobe = 0.0;   // max_m |w^H a_m| - t
  double mainlobe = 0.0;   // 1 - (Re w^H a_0 - sum delta |w|)
  double phase = 0.0;      // |Im w^H a_0|
};

inline FeasibilityGaps feasibility_gaps(const ProblemInstance<double>& inst, const Beamformer<double>& w, double t) {
  FeasibilityGaps g;
  g.sidelobe = (inst.sidelobe_svs.adjoint() * w).cwiseAbs().maxCoeff() - t;
  const Complex<double> main = w.dot(inst.mainlobe_sv);
  g.mainlobe = 1.0 - (main.real() - inst.radii.delta.dot(w.cwiseAbs()));
  g.phase = std::abs(main.imag());
  return g;
}

}  // namespace robeam::testing

#endif  // ROBEAM_TESTS_SUPPORT_HPP
