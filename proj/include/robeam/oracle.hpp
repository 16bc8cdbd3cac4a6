#ifndef ROBEAM_ORACLE_HPP
#define ROBEAM_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "robeam/admm.hpp"
#include "robeam/problem.hpp"

namespace robeam {

/// Robustness penalty used by the reference solver: the element-wise sum
/// sum_n delta_n |w_n| of the disk model, or eps ||w||_2 of the sphere model.
template <typename Scalar = double>
struct Regularizer {
  enum class Kind { Elementwise, Sphere };
  Kind kind = Kind::Elementwise;
  RealVector<Scalar> delta;  // Elementwise
  Scalar epsilon = Scalar(0);  // Sphere

  static Regularizer elementwise(const DiskRadii<Scalar>& radii) { return {Kind::Elementwise, radii.delta, Scalar(0)}; }
  static Regularizer sphere(Scalar eps) { return {Kind::Sphere, {}, eps}; }

  Scalar value(const Beamformer<Scalar>& w) const {
    return kind == Kind::Elementwise ? delta.dot(w.cwiseAbs()) : epsilon * w.norm();
  }

  /// One subgradient (zero at kinks).
  Beamformer<Scalar> subgradient(const Beamformer<Scalar>& w) const {
    Beamformer<Scalar> g = Beamformer<Scalar>::Zero(w.size());
    if (kind == Kind::Elementwise) {
      for (Index n = 0; n < w.size(); ++n) {
        const Scalar mag = std::abs(w(n));
        if (mag > Scalar(0)) g(n) = delta(n) * w(n) / mag;
      }
    } else {
      const Scalar norm = w.norm();
      if (norm > Scalar(0)) g = epsilon * w / norm;
    }
    return g;
  }
};

struct OracleConfig {
  double penalty_mu = 100.0;
  // Step k moves w by initial_step * r / sqrt(k) along the unit subgradient, where r is
  // the norm of the matched filter scaled onto the main-lobe constraint.
  double initial_step = 2.0;
  long iterations = 200000;  // total over all stages
  // Each stage restarts k at 1 from the best point found so far, with the
  // step multiplied by stage_shrink.
  int stages = 4;
  double stage_shrink = 0.1;
  double tol = 1e-3;  // feasibility of the raw best iterate before rescaling
  std::optional<std::uint64_t> random_start;  // seed; unset starts from the matched filter

  void validate() const {
    if (!(penalty_mu > 0.0) || !(initial_step > 0.0) || iterations < 1 || !(tol > 0.0) || stages < 1 ||
        !(stage_shrink > 0.0 && stage_shrink <= 1.0))
      throw DomainError("oracle configuration values must be positive");
  }
};

template <typename Scalar = double>
struct OracleResult {
  Beamformer<Scalar> w;
  Scalar objective = Scalar(0);  // side-lobe peak + regularizer at the returned w
  Scalar penalty_violation = Scalar(0);  // [1 + R - Re w^H a_0]^+ of the raw best iterate
  bool ok = false;  // false when no iterate with positive main-lobe margin was found
};

/// Reference solver for
///   min max_m |w^H a_m| + R(w)  s.t.  Re w^H a_0 >= R(w) + 1,  Im w^H a_0 = 0
/// by projected subgradient on the exact penalty
///   F(w) = max_m |w^H a_m| + R(w) + mu [1 + R(w) - Re w^H a_0]^+
/// over the hyperplane Im w^H a_0 = 0, whose projection is closed form.
///
/// Objective and constraint margin are both positively homogeneous, so any
/// iterate with margin g(w) = Re w^H a_0 - R(w) > 0 scales to the feasible
/// point w / g(w) with objective f(w) / g(w). The best such ratio is returned,
/// which makes the result exactly feasible regardless of where the raw
/// iterates sit relative to the constraint.
template <typename Scalar>
OracleResult<Scalar> oracle_solve(const ProblemInstance<Scalar>& instance, const Regularizer<Scalar>& reg,
                                  const OracleConfig& config = {}) {
  instance.validate();
  config.validate();
  const Index n = instance.num_elements();
  const auto& a0 = instance.mainlobe_sv;
  const auto& side = instance.sidelobe_svs;
  const Scalar a0_norm2 = a0.squaredNorm();
  const Scalar mu = Scalar(config.penalty_mu);

  auto project = [&](Beamformer<Scalar>& w) {
    const Scalar im = response(w, a0).imag();
    w += Complex<Scalar>(Scalar(0), im / a0_norm2) * a0;
  };

  // Matched filter scaled to satisfy the main-lobe constraint with equality.
  const Scalar mf_margin = a0_norm2 - reg.value(a0);
  const Scalar step_scale = mf_margin > Scalar(0) ? a0.norm() / mf_margin : Scalar(1) / a0.norm();

  Beamformer<Scalar> w;
  if (config.random_start) {
    Rng rng(*config.random_start);
    w.resize(n);
    for (Index k = 0; k < n; ++k) w(k) = Complex<Scalar>(Scalar(rng.uniform(-1, 1)), Scalar(rng.uniform(-1, 1)));
    w *= step_scale / w.norm();
  } else {
    w = a0 * (step_scale / a0.norm());
  }
  project(w);

  OracleResult<Scalar> best;
  best.objective = std::numeric_limits<Scalar>::infinity();
  Scalar best_ratio = std::numeric_limits<Scalar>::infinity();
  Beamformer<Scalar> best_raw = w;

  ComplexVector<Scalar> p(side.cols());
  const long per_stage = std::max<long>(config.iterations / config.stages, 1);
  Scalar step0 = Scalar(config.initial_step) * step_scale;
  for (int stage = 0; stage < config.stages; ++stage) {
    if (stage > 0) {
      if (!std::isfinite(best_ratio)) break;
      w = best_raw / (response(best_raw, a0).real() - reg.value(best_raw));
      project(w);
      step0 *= Scalar(config.stage_shrink);
    }
    for (long k = 1; k <= per_stage; ++k) {
      p.noalias() = side.adjoint() * w;  // conj(w^H a_m)
      Index peak_idx = 0;
      const Scalar peak = p.cwiseAbs().maxCoeff(&peak_idx);  // first maximizer on ties
      const Scalar reg_value = reg.value(w);
      const Scalar margin = response(w, a0).real() - reg_value;

      if (margin > Scalar(0)) {
        const Scalar ratio = (peak + reg_value) / margin;
        if (ratio < best_ratio) {
          best_ratio = ratio;
          best_raw = w;
        }
      }

      Beamformer<Scalar> g = reg.subgradient(w);
      if (peak > Scalar(0)) g += side.col(peak_idx) * (p(peak_idx) / peak);
      if (Scalar(1) - margin > Scalar(0)) g += mu * (reg.subgradient(w) - a0);
      // keep the step inside the hyperplane
      g -= Complex<Scalar>(Scalar(0), a0.dot(g).imag() / a0_norm2) * a0;
      const Scalar g_norm = g.norm();
      if (g_norm == Scalar(0)) break;
      w -= (step0 / std::sqrt(Scalar(k)) / g_norm) * g;
      project(w);
    }
  }

  if (!std::isfinite(best_ratio)) return best;
  const Scalar margin = response(best_raw, a0).real() - reg.value(best_raw);
  best.penalty_violation = positive_part(Scalar(1) - margin);
  best.w = best_raw / margin;
  project(best.w);
  best.objective = (side.adjoint() * best.w).cwiseAbs().maxCoeff() + reg.value(best.w);
  best.ok = true;
  return best;
}

template <typename Scalar>
OracleResult<Scalar> oracle_solve(const ProblemInstance<Scalar>& instance, const OracleConfig& config = {}) {
  return oracle_solve(instance, Regularizer<Scalar>::elementwise(instance.radii), config);
}

/// Multipliers for the epigraph form of the robust problem:
/// one per side-lobe constraint |w^H a_m| <= t and one for the main-lobe constraint.
template <typename Scalar = double>
struct KktDuals {
  RealVector<Scalar> sidelobe;
  Scalar mainlobe = Scalar(0);
};

/// Recovers problem multipliers from ADMM duals: |lambda_m| for the side lobes,
/// Re lambda_0 for the main lobe.
template <typename Scalar>
KktDuals<Scalar> duals_from_admm(const AdmmState<Scalar>& state) {
  const Index m_count = state.lambda.size() - 1;
  return {state.lambda.tail(m_count).cwiseAbs(), state.lambda(0).real()};
}

template <typename Scalar = double>
struct KktReport {
  Scalar stationarity_residual = Scalar(0);
  Scalar sidelobe_feasibility = Scalar(0);  // [max_m |w^H a_m| - t]^+
  Scalar mainlobe_feasibility = Scalar(0);  // [1 + sum delta |w| - Re w^H a_0]^+
  Scalar phase_feasibility = Scalar(0);     // |Im w^H a_0|
  Scalar complementarity_residual = Scalar(0);

  Scalar max_feasibility() const { return std::max({sidelobe_feasibility, mainlobe_feasibility, phase_feasibility}); }
  Scalar max_residual() const { return std::max({stationarity_residual, max_feasibility(), complementarity_residual}); }
};

/// First-order certificate for
///   min t + sum delta_n |w_n|  s.t. |w^H a_m| <= t, Re w^H a_0 >= sum delta_n |w_n| + 1, Im w^H a_0 = 0.
///
/// Stationarity is the norm of
///   sum_m mu_m a_m s_m + (1 + nu) delta .* sigma - nu a_0 + kappa (j a_0)
/// minimized over the phase multiplier kappa and over subgradients taken in an
/// eta-neighbourhood of w, eta = perturbation * (1 + ||w||): sigma_n ranges over
/// the subdifferential of |.| at any point within eta of w_n (the whole unit
/// disk once |w_n| <= eta, otherwise an arc around the phase of w_n), and s_m
/// likewise around w^H a_m with radius eta ||a_m||. Added to it are |1 - sum mu|
/// (only the excess over one when t is within the apex radius) and any negative
/// multiplier. The minimization is block coordinate descent,
/// so the reported value is an upper bound on the exact distance.
template <typename Scalar>
KktReport<Scalar> kkt_check(const ProblemInstance<Scalar>& instance, const Beamformer<Scalar>& w, Scalar t,
                            const KktDuals<Scalar>& duals, Scalar perturbation = Scalar(1e-5)) {
  instance.validate();
  const Index n = instance.num_elements();
  const Index m_count = instance.num_sidelobes();
  if (w.size() != n || duals.sidelobe.size() != m_count) throw ConstructionError("KKT candidate has wrong dimensions");
  const auto& a0 = instance.mainlobe_sv;
  const auto& side = instance.sidelobe_svs;
  const RealVector<Scalar>& delta = instance.radii.delta;
  const RealVector<Scalar> mu = duals.sidelobe.cwiseMax(Scalar(0));
  const Scalar nu = positive_part(duals.mainlobe);
  const Scalar eta = perturbation * (Scalar(1) + w.norm());

  const ComplexVector<Scalar> p = side.adjoint() * w;  // conj(w^H a_m)
  const Complex<Scalar> main = response(w, a0);
  const Scalar reg = delta.dot(w.cwiseAbs());

  KktReport<Scalar> rep;
  rep.sidelobe_feasibility = positive_part(p.cwiseAbs().maxCoeff() - t);
  rep.mainlobe_feasibility = positive_part(Scalar(1) + reg - main.real());
  rep.phase_feasibility = std::abs(main.imag());

  Scalar comp = nu * std::abs(main.real() - reg - Scalar(1));
  for (Index m = 0; m < m_count; ++m) comp += mu(m) * std::abs(std::abs(p(m)) - t);
  rep.complementarity_residual = comp;

  // Closest admissible subgradient to `target` for the point z with perturbation radius r.
  auto admissible = [](Complex<Scalar> z, Scalar r, Complex<Scalar> target) -> Complex<Scalar> {
    const Scalar mag = std::abs(z);
    if (mag <= r) {
      const Scalar tm = std::abs(target);
      return tm > Scalar(1) ? target / tm : target;
    }
    const Scalar half_width = std::asin(r / mag);
    const Scalar centre = std::arg(z);
    Scalar offset = std::remainder(std::arg(target) - centre, Scalar(2) * std::numbers::pi_v<Scalar>);
    if (std::abs(target) == Scalar(0)) offset = Scalar(0);
    offset = std::clamp(offset, -half_width, half_width);
    return std::polar(Scalar(1), centre + offset);
  };

  ComplexVector<Scalar> s(m_count);
  ComplexVector<Scalar> sigma(n);
  std::vector<Scalar> s_radius(static_cast<std::size_t>(m_count));
  for (Index m = 0; m < m_count; ++m) {
    s_radius[m] = eta * side.col(m).norm();
    s(m) = admissible(p(m), s_radius[m], p(m));
  }
  for (Index k = 0; k < n; ++k) sigma(k) = admissible(w(k), eta, w(k));

  const ComplexVector<Scalar> ja0 = Complex<Scalar>(Scalar(0), Scalar(1)) * a0;
  const RealVector<Scalar> sigma_weight = (Scalar(1) + nu) * delta;
  ComplexVector<Scalar> r = side * (mu.template cast<Complex<Scalar>>().cwiseProduct(s));
  r += sigma_weight.template cast<Complex<Scalar>>().cwiseProduct(sigma);
  r -= nu * a0;
  Scalar kappa = Scalar(0);

  for (int sweep = 0; sweep < 10000; ++sweep) {
    const Scalar prev = r.norm();
    r -= kappa * ja0;
    kappa = -ja0.dot(r).real() / ja0.squaredNorm();
    r += kappa * ja0;
    for (Index m = 0; m < m_count; ++m) {
      if (mu(m) == Scalar(0)) continue;
      const auto col = side.col(m);
      r -= mu(m) * s(m) * col;
      s(m) = admissible(p(m), s_radius[m], -col.dot(r) / (mu(m) * col.squaredNorm()));
      r += mu(m) * s(m) * col;
    }
    for (Index k = 0; k < n; ++k) {
      if (sigma_weight(k) == Scalar(0)) continue;
      const Complex<Scalar> rest = r(k) - sigma_weight(k) * sigma(k);
      sigma(k) = admissible(w(k), eta, -rest / sigma_weight(k));
      r(k) = rest + sigma_weight(k) * sigma(k);
    }
    if (prev - r.norm() <= Scalar(0)) break;
  }

  Scalar stationarity = r.norm();
  // At the cone apex (t = 0, every side lobe nulled) a multiplier only has to
  // dominate |lambda_m|, so the weights may sum to less than one.
  const Scalar apex_radius = m_count ? eta * side.colwise().norm().maxCoeff() : Scalar(0);
  stationarity += t <= apex_radius ? positive_part(mu.sum() - Scalar(1)) : std::abs(Scalar(1) - mu.sum());
  stationarity += (duals.sidelobe - mu).cwiseAbs().sum() + std::abs(duals.mainlobe - nu);
  rep.stationarity_residual = stationarity;
  return rep;
}

}  // namespace robeam

#endif  // ROBEAM_ORACLE_HPP
