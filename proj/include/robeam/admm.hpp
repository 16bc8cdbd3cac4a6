#ifndef ROBEAM_ADMM_HPP
#define ROBEAM_ADMM_HPP

#include <Eigen/Cholesky>

#include <chrono>
#include <stdexcept>
#include <vector>

#include "robeam/problem.hpp"
#include "robeam/prox.hpp"

namespace robeam {

struct SolverConfig {
  double rho = 1.0;
  double tol = 1e-6;
  double feas_tol = 1e-8;
  long max_iter = 100000;
  bool record_history = true;

  void validate() const {
    if (!(rho > 0.0) || !(tol > 0.0) || !(feas_tol > 0.0) || max_iter < 1)
      throw DomainError("solver configuration values must be positive");
  }

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

/// Live ADMM iterate. Index 0 of x and lambda belongs to the main lobe.
template <typename Scalar = double>
struct AdmmState {
  Beamformer<Scalar> w;
  ComplexVector<Scalar> v;
  ComplexVector<Scalar> x;
  Scalar t = Scalar(0);
  ComplexVector<Scalar> lambda;
  ComplexVector<Scalar> gamma;
  long iter = 0;

  static AdmmState zeros(Index num_elements, Index num_sidelobes) {
    AdmmState s;
    s.w = Beamformer<Scalar>::Zero(num_elements);
    s.v = ComplexVector<Scalar>::Zero(num_elements);
    s.x = ComplexVector<Scalar>::Zero(num_sidelobes + 1);
    s.lambda = ComplexVector<Scalar>::Zero(num_sidelobes + 1);
    s.gamma = ComplexVector<Scalar>::Zero(num_elements);
    return s;
  }
};

/// Cholesky factor of A = rho (sum_m a_m a_m^H + I), built once per instance,
/// together with the stacked steering matrix [a_0 a_1 ... a_M] it came from.
template <typename Scalar = double>
struct WUpdateSystem {
  ComplexMatrix<Scalar> steering;
  Eigen::LLT<ComplexMatrix<Scalar>> factor;
  Scalar rho = Scalar(1);

  ComplexMatrix<Scalar> reconstruct() const {
    const auto& l = factor.matrixL();
    return ComplexMatrix<Scalar>(l) * ComplexMatrix<Scalar>(l).adjoint();
  }

  /// Responses w^H a_m for m = 0..M.
  ComplexVector<Scalar> responses(const Beamformer<Scalar>& w) const { return (steering.adjoint() * w).conjugate(); }
};

template <typename Scalar>
WUpdateSystem<Scalar> precompute_w_system(const ProblemInstance<Scalar>& instance, Scalar rho) {
  instance.validate();
  if (!(rho > Scalar(0))) throw DomainError("penalty rho must be positive");
  WUpdateSystem<Scalar> sys;
  sys.rho = rho;
  sys.steering = instance.stacked_steering();
  const Index n = instance.num_elements();
  ComplexMatrix<Scalar> a = ComplexMatrix<Scalar>::Identity(n, n);
  a.template selfadjointView<Eigen::Lower>().rankUpdate(sys.steering);
  a *= rho;
  sys.factor.compute(a);
  if (sys.factor.info() != Eigen::Success) throw std::logic_error("w-update matrix is not positive definite");
  return sys;
}

/// b = sum_m conj(lambda_m + rho x_m) a_m + gamma + rho v; w = A^{-1} b.
///
/// The multiplier enters conjugated: the Lagrangian term Re{conj(lambda_m) (x_m - w^H a_m)}
/// is linear in w with gradient -conj(lambda_m) a_m.
template <typename Scalar>
Beamformer<Scalar> update_w(const WUpdateSystem<Scalar>& sys, const AdmmState<Scalar>& state) {
  const ComplexVector<Scalar> b =
      sys.steering * (state.lambda + sys.rho * state.x).conjugate() + state.gamma + sys.rho * state.v;
  return sys.factor.solve(b);
}

/// Joint minimizer of the augmented Lagrangian over (v, x, t) for the current w;
/// the side-lobe and main-lobe parts separate and are solved in closed form.
template <typename Scalar>
void update_blocks(AdmmState<Scalar>& state, const WUpdateSystem<Scalar>& sys, const ProblemInstance<Scalar>& instance) {
  const Scalar rho = sys.rho;
  const ComplexVector<Scalar> c = state.lambda / rho - sys.responses(state.w);
  const Index m_count = c.size() - 1;

  const auto side = solve_sidelobe_prox(SidelobeProxInput<Scalar>{c.tail(m_count), rho});
  const auto main = solve_mainlobe_prox(MainlobeProxInput<Scalar>{c(0), state.gamma / rho - state.w, instance.radii, rho});

  state.t = side.t;
  state.x(0) = Complex<Scalar>(main.x0, Scalar(0));
  state.x.tail(m_count) = side.x;
  state.v = main.v;
}

template <typename Scalar>
void update_multipliers(AdmmState<Scalar>& state, const WUpdateSystem<Scalar>& sys) {
  state.lambda += sys.rho * (state.x - sys.responses(state.w));
  state.gamma += sys.rho * (state.v - state.w);
}

/// Augmented Lagrangian L_rho; it ignores the (v, x, t) constraints, which the
/// block update enforces.
template <typename Scalar>
Scalar augmented_lagrangian(const AdmmState<Scalar>& state, const WUpdateSystem<Scalar>& sys,
                            const ProblemInstance<Scalar>& instance) {
  const ComplexVector<Scalar> rx = state.x - sys.responses(state.w);
  const ComplexVector<Scalar> rv = state.v - state.w;
  return state.t + instance.radii.delta.dot(state.v.cwiseAbs()) + state.lambda.dot(rx).real() +
         state.gamma.dot(rv).real() + sys.rho / Scalar(2) * (rx.squaredNorm() + rv.squaredNorm());
}

struct ResidualSample {
  double primal_x = 0.0;
  double primal_v = 0.0;
  double delta_w = 0.0;
};

template <typename Scalar = double>
struct SolveReport {
  Beamformer<Scalar> w_opt;
  Scalar objective_aux = Scalar(0);     // t + sum delta_n |v_n|
  Scalar objective_direct = Scalar(0);  // max_m |w^H a_m| + sum delta_n |w_n|
  long iterations = 0;
  std::vector<ResidualSample> residual_history;
  ResidualSample final_residual;
  bool converged = false;
  double wall_time = 0.0;  // seconds, solve loop only
  AdmmState<Scalar> state;
};

/// max over side lobes of |w^H a_m| plus sum delta_n |w_n|.
template <typename Scalar>
Scalar robust_objective(const ProblemInstance<Scalar>& instance, const Beamformer<Scalar>& w) {
  const Scalar peak = (instance.sidelobe_svs.adjoint() * w).cwiseAbs().maxCoeff();
  return peak + instance.radii.delta.dot(w.cwiseAbs());
}

template <typename Scalar>
SolveReport<Scalar> solve(const ProblemInstance<Scalar>& instance, const SolverConfig& config,
                          const WUpdateSystem<Scalar>& sys) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  SolveReport<Scalar> report;
  AdmmState<Scalar> state = AdmmState<Scalar>::zeros(instance.num_elements(), instance.num_sidelobes());
  const Scalar tol = Scalar(config.tol);

  for (long i = 0; i < config.max_iter; ++i) {
    const Beamformer<Scalar> w_prev = state.w;
    state.w = update_w(sys, state);
    update_blocks(state, sys, instance);
    const ComplexVector<Scalar> rx = state.x - sys.responses(state.w);
    const ComplexVector<Scalar> rv = state.v - state.w;
    state.lambda += sys.rho * rx;
    state.gamma += sys.rho * rv;
    state.iter = i + 1;

    ResidualSample r{double(rx.cwiseAbs().maxCoeff()), double(rv.cwiseAbs().maxCoeff()),
                     double((state.w - w_prev).cwiseAbs().maxCoeff())};
    report.final_residual = r;
    if (config.record_history) report.residual_history.push_back(r);
    if (std::max({r.primal_x, r.primal_v, r.delta_w}) <= double(tol)) {
      report.converged = true;
      break;
    }
  }

  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.iterations = state.iter;
  report.w_opt = state.w;
  report.objective_aux = state.t + instance.radii.delta.dot(state.v.cwiseAbs());
  report.objective_direct = robust_objective(instance, state.w);
  report.state = std::move(state);
  return report;
}

template <typename Scalar>
SolveReport<Scalar> solve(const ProblemInstance<Scalar>& instance, const SolverConfig& config = {}) {
  config.validate();
  return solve(instance, config, precompute_w_system(instance, Scalar(config.rho)));
}

}  // namespace robeam

#endif  // ROBEAM_ADMM_HPP
