#include <cmath>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "robeam/admm.hpp"
#include "robeam/oracle.hpp"
#include "robeam/runner.hpp"
#include "support.hpp"

using namespace robeam;
using robeam::testing::feasibility_gaps;
using robeam::testing::random_complex;
using robeam::testing::random_instance;

namespace {

// N = 1, M = 0, a_0 = 1
ProblemInstance<double> scalar_instance() {
  ProblemInstance<double> inst;
  inst.mainlobe_sv = SteeringVector<double>::Ones(1);
  inst.sidelobe_svs = ComplexMatrix<double>(1, 0);
  inst.radii = DiskRadii<double>::zero(1);
  return inst;
}

AdmmState<double> random_state(Rng& rng, Index n, Index m) {
  auto s = AdmmState<double>::zeros(n, m);
  s.w = random_complex(rng, n, 1.0);
  s.v = random_complex(rng, n, 1.0);
  s.x = random_complex(rng, m + 1, 1.0);
  s.lambda = random_complex(rng, m + 1, 1.0);
  s.gamma = random_complex(rng, n, 1.0);
  s.t = rng.uniform(0.0, 2.0);
  return s;
}

// Projects (v, x, t) onto the block constraints so the state is admissible.
void make_admissible(AdmmState<double>& s, const ProblemInstance<double>& inst) {
  const Index m = s.x.size() - 1;
  s.t = std::max(s.t, m ? s.x.tail(m).cwiseAbs().maxCoeff() : 0.0);
  s.x(0) = std::max(s.x(0).real(), inst.radii.delta.dot(s.v.cwiseAbs()) + 1.0);
}

const ProblemInstance<double>& ladder_case() {
  static const auto inst = bench_instance(24, 8, 0.15);
  return inst;
}

}  // namespace

TEST_SUITE("admm") {
  TEST_CASE("scalar system matrix equals 2") {
    const auto sys = precompute_w_system(scalar_instance(), 1.0);
    CHECK(std::abs(sys.reconstruct()(0, 0) - 2.0) < 1e-15);
  }

  TEST_CASE("scalar w-update solves 2w = 1") {
    const auto inst = scalar_instance();
    const auto sys = precompute_w_system(inst, 1.0);
    auto state = AdmmState<double>::zeros(1, 0);
    state.x(0) = 1.0;
    const auto w = update_w(sys, state);
    CHECK(std::abs(w(0) - Complex<double>(0.5)) < 1e-15);
  }

  TEST_CASE("zero state gives zero w") {
    const auto& inst = ladder_case();
    const auto sys = precompute_w_system(inst, 1.0);
    CHECK(update_w(sys, AdmmState<double>::zeros(8, 24)).isZero(0.0));
  }

  TEST_CASE("factor reconstructs A and A - rho I is positive semidefinite") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      const auto inst = random_instance(rng, 2 + Index(rng.uniform() * 10), 1 + Index(rng.uniform() * 30), 0.2);
      const double rho = rng.uniform(0.2, 3.0);
      const auto sys = precompute_w_system(inst, rho);
      const ComplexMatrix<double> s = inst.stacked_steering();
      const ComplexMatrix<double> a =
          rho * (s * s.adjoint() + ComplexMatrix<double>::Identity(inst.num_elements(), inst.num_elements()));
      CHECK((sys.reconstruct() - a).norm() / a.norm() <= 1e-10);
      const ComplexMatrix<double> shifted = a - rho * ComplexMatrix<double>::Identity(a.rows(), a.cols());
      Eigen::SelfAdjointEigenSolver<ComplexMatrix<double>> eig(shifted);
      CHECK(eig.eigenvalues().minCoeff() >= -1e-10 * a.norm());
    }
  }

  TEST_CASE("solving with the factor reproduces b") {
    Rng rng(5);
    const auto inst = random_instance(rng, 2, 1, 0.1);
    const auto sys = precompute_w_system(inst, 1.0);
    const ComplexVector<double> b = random_complex(rng, 2, 1.0);
    const ComplexVector<double> u = sys.factor.solve(b);
    CHECK((sys.reconstruct() * u - b).norm() <= 1e-10 * b.norm());
  }

  TEST_CASE("w-update is stationary for the augmented Lagrangian") {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
      const Index n = 1 + Index(rng.uniform() * 8), m = 1 + Index(rng.uniform() * 12);
      const auto inst = random_instance(rng, n, m, 0.2);
      const double rho = rng.uniform(0.5, 2.0);
      const auto sys = precompute_w_system(inst, rho);
      auto state = random_state(rng, n, m);
      state.w = update_w(sys, state);
      const ComplexVector<double> b =
          sys.steering * (state.lambda + rho * state.x).conjugate() + state.gamma + rho * state.v;

      const double h = 1e-5;
      double grad2 = 0.0;
      for (Index k = 0; k < n; ++k)
        for (Complex<double> dir : {Complex<double>(1, 0), Complex<double>(0, 1)}) {
          auto plus = state, minus = state;
          plus.w(k) += h * dir;
          minus.w(k) -= h * dir;
          const double g = (augmented_lagrangian(plus, sys, inst) - augmented_lagrangian(minus, sys, inst)) / (2 * h);
          grad2 += g * g;
        }
      CHECK(std::sqrt(grad2) <= 1e-6 * (1.0 + b.norm()));
    }
  }

  TEST_CASE("block update from w = 0 with zero multipliers") {
    const auto& inst = ladder_case();
    const auto sys = precompute_w_system(inst, 1.0);
    auto state = AdmmState<double>::zeros(8, 24);
    update_blocks(state, sys, inst);
    CHECK(state.t == 0.0);
    CHECK(state.x.tail(24).isZero(0.0));
    CHECK(state.x(0) == Complex<double>(1.0));
    CHECK(state.v.isZero(0.0));
  }

  TEST_CASE("block update is admissible and does not increase the augmented Lagrangian") {
    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
      const Index n = 1 + Index(rng.uniform() * 8), m = 1 + Index(rng.uniform() * 12);
      const auto inst = random_instance(rng, n, m, 0.3);
      const auto sys = precompute_w_system(inst, rng.uniform(0.3, 3.0));
      auto state = random_state(rng, n, m);
      make_admissible(state, inst);
      const double before = augmented_lagrangian(state, sys, inst);
      update_blocks(state, sys, inst);
      const double after = augmented_lagrangian(state, sys, inst);
      CHECK(after <= before + 1e-12 * (1 + std::abs(before)));
      CHECK(state.t >= 0.0);
      CHECK(state.x.tail(m).cwiseAbs().maxCoeff() <= state.t + 1e-8);
      CHECK(state.x(0).imag() == 0.0);
      CHECK(state.x(0).real() - inst.radii.delta.dot(state.v.cwiseAbs()) - 1.0 >= -1e-8);
    }
  }

  TEST_CASE("multiplier update") {
    const auto inst = scalar_instance();
    const auto sys = precompute_w_system(inst, 1.0);

    auto state = AdmmState<double>::zeros(1, 0);
    state.w(0) = 0.7;
    state.v(0) = 0.7;
    state.x(0) = 0.7;  // w^H a_0 = 0.7
    state.lambda(0) = Complex<double>(0.2, -0.1);
    state.gamma(0) = 0.3;
    const auto unchanged = state;
    update_multipliers(state, sys);
    CHECK(state.lambda == unchanged.lambda);
    CHECK(state.gamma == unchanged.gamma);

    state = AdmmState<double>::zeros(1, 0);
    state.x(0) = 0.5;
    update_multipliers(state, sys);
    CHECK(state.lambda(0) == Complex<double>(0.5));

    auto half = AdmmState<double>::zeros(1, 0);
    half.x(0) = 0.25;
    update_multipliers(half, sys);
    CHECK(half.lambda(0) == 0.5 * state.lambda(0));
  }

  TEST_CASE("nominal four-element design matches the conic optimum") {
    AngleGrid grid;
    grid.mainlobe = 90.0;
    grid.sidelobe_angles = {0, 20, 40, 60, 120, 140, 160, 180};
    const auto inst = build_instance(ArrayGeometry(4), grid, DiskRadii<double>::zero(4));
    const auto report = solve(inst);
    REQUIRE(report.converged);
    // interior-point optimum of the same problem at 1e-12 gap
    CHECK(std::abs(report.objective_direct - 0.1413916703274791) / 0.1413916703274791 <= 1e-3);
    const auto oracle = oracle_solve(inst);
    REQUIRE(oracle.ok);
    CHECK(std::abs(report.objective_direct - oracle.objective) / oracle.objective <= 1e-3);
  }

  TEST_CASE("eight-element robust design converges and is feasible") {
    const auto& inst = ladder_case();
    const SolverConfig config;
    const auto report = solve(inst, config);
    REQUIRE(report.converged);
    const auto& w = report.w_opt;
    const double margin = w.dot(inst.mainlobe_sv).real() - inst.radii.delta.dot(w.cwiseAbs());
    CHECK(margin >= 1.0 - 1e-6);
    // interior-point optimum of the same problem at 1e-12 gap
    CHECK(std::abs(report.objective_direct - 0.6715524549110068) / 0.6715524549110068 <= 1e-4);
    CHECK(std::abs(report.objective_aux - report.objective_direct) <= 10 * config.tol * (24 + 8));
  }

  TEST_CASE("converged runs satisfy the constraints and agree on the objective") {
    Rng rng(21);
    const SolverConfig config;
    for (int trial = 0; trial < 10; ++trial) {
      const Index n = 2 + Index(rng.uniform() * 9), m = 4 + Index(rng.uniform() * 27);
      const auto inst = random_instance(rng, n, m, 0.2);
      const auto report = solve(inst, config);
      REQUIRE(report.converged);
      const auto gaps = feasibility_gaps(inst, report.w_opt, report.state.t);
      CHECK(gaps.sidelobe <= 10 * config.tol);
      CHECK(gaps.mainlobe <= 10 * config.tol);
      CHECK(gaps.phase <= 10 * config.tol);
      CHECK(report.state.t >= 0.0);
      CHECK(std::abs(report.objective_aux - report.objective_direct) <= 10 * config.tol * double(m + n));
      const auto& last = report.residual_history.back();
      CHECK(std::max({last.primal_x, last.primal_v, last.delta_w}) <= config.tol);
      for (const auto& r : report.residual_history) {
        CHECK(std::isfinite(r.primal_x));
        CHECK(std::isfinite(r.primal_v));
      }
    }
  }

  TEST_CASE("solves are deterministic") {
    const auto& inst = ladder_case();
    const auto a = solve(inst);
    const auto b = solve(inst);
    CHECK(a.iterations == b.iterations);
    CHECK(a.w_opt == b.w_opt);
    CHECK(a.objective_direct == b.objective_direct);
    REQUIRE(a.residual_history.size() == b.residual_history.size());
    for (std::size_t i = 0; i < a.residual_history.size(); ++i)
      CHECK(a.residual_history[i].primal_x == b.residual_history[i].primal_x);
  }

  TEST_CASE("hitting the iteration cap is reported, not thrown") {
    SolverConfig config;
    config.max_iter = 5;
    const auto report = solve(ladder_case(), config);
    CHECK_FALSE(report.converged);
    CHECK(report.iterations == 5);
    CHECK(report.residual_history.size() == 5);
  }

  TEST_CASE("invalid configuration is rejected") {
    SolverConfig config;
    config.rho = 0.0;
    CHECK_THROWS(solve(ladder_case(), config));
    config = {};
    config.tol = -1.0;
    CHECK_THROWS(solve(ladder_case(), config));
  }
}
