#include "robeam/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace robeam {

namespace {

std::string fixed9(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", value);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::string pattern_csv(const PatternSweep<double>& pattern) {
  std::string out = "angle_deg,nominal,worst_elementwise,worst_sphere,nominal_db,worst_elementwise_db,worst_sphere_db\n";
  for (const auto& s : pattern.samples) {
    out += fixed9(s.angle) + ',' + fixed9(s.nominal) + ',' + fixed9(s.worst_elementwise) + ',' +
           fixed9(s.worst_sphere) + ',' + fixed9(to_db(s.nominal)) + ',' + fixed9(to_db(s.worst_elementwise)) + ',' +
           fixed9(to_db(s.worst_sphere)) + '\n';
  }
  return out;
}

std::string report_json(const SolveReport<double>& report, const PatternSweep<double>& pattern) {
  nlohmann::json j;
  std::vector<double> re, im;
  for (Index n = 0; n < report.w_opt.size(); ++n) {
    re.push_back(report.w_opt(n).real());
    im.push_back(report.w_opt(n).imag());
  }
  j["w_opt"] = {{"real", re}, {"imag", im}};
  j["objective_aux"] = report.objective_aux;
  j["objective_direct"] = report.objective_direct;
  j["iterations"] = report.iterations;
  j["converged"] = report.converged;
  j["wall_time_s"] = report.wall_time;
  j["final_residual"] = {{"primal_x", report.final_residual.primal_x},
                         {"primal_v", report.final_residual.primal_v},
                         {"delta_w", report.final_residual.delta_w}};
  std::vector<double> px, pv, dw;
  for (const auto& r : report.residual_history) {
    px.push_back(r.primal_x);
    pv.push_back(r.primal_v);
    dw.push_back(r.delta_w);
  }
  j["residual_history"] = {{"primal_x", px}, {"primal_v", pv}, {"delta_w", dw}};
  j["summary"] = {{"peak_worst_case_db", pattern.summary.peak_worst_case_db},
                  {"peak_angle_deg", pattern.summary.peak_angle},
                  {"mainlobe_worst_min", pattern.summary.mainlobe_worst_min}};
  return j.dump(2) + "\n";
}

RunArtifacts run_synthesis(const Scenario& scenario, const std::filesystem::path& out_dir,
                           std::optional<std::uint64_t> seed_override) {
  validate_scenario(scenario);
  const AngleGrid grid = scenario_grid(scenario);
  const DiskRadii<double> radii = scenario_radii(scenario, seed_override);

  RunArtifacts art;
  art.instance = build_instance(scenario.geometry, grid, radii);
  art.report = solve(art.instance, scenario.solver);
  art.pattern = sweep(art.report.w_opt, scenario.geometry, grid, radii);
  art.pattern_path = out_dir / scenario.output.pattern_csv;
  art.report_path = out_dir / scenario.output.report;
  write_file(art.pattern_path, pattern_csv(art.pattern));
  write_file(art.report_path, report_json(art.report, art.pattern));
  return art;
}

AngleGrid bench_grid(Index num_sidelobes) {
  if (num_sidelobes < 1) throw DomainError("side-lobe count must be positive");
  AngleGrid grid;
  grid.mainlobe = 90.0;
  for (Index k = 0; k <= num_sidelobes; ++k) {
    const double angle = 180.0 * double(k) / double(num_sidelobes);
    if (angle != 90.0) grid.sidelobe_angles.push_back(angle);
  }
  if (grid.num_sidelobes() > num_sidelobes) grid.sidelobe_angles.pop_back();
  grid.validate();
  return grid;
}

ProblemInstance<double> bench_instance(Index num_sidelobes, Index num_elements, double delta) {
  return build_instance(ArrayGeometry(num_elements), bench_grid(num_sidelobes),
                        DiskRadii<double>::constant(num_elements, delta));
}

std::vector<BenchRow> run_bench(const std::vector<std::pair<Index, Index>>& pairs, double delta, int repeats,
                                const BenchOptions& options) {
  if (repeats < 1) throw DomainError("repeats must be at least one");
  std::vector<BenchRow> rows;
  SolverConfig solver = options.solver;
  solver.record_history = false;
  for (const auto& [m, n] : pairs) {
    const auto instance = bench_instance(m, n, delta);
    BenchRow row;
    row.num_sidelobes = m;
    row.num_elements = n;
    std::vector<double> times;
    for (int r = 0; r < repeats; ++r) {
      const auto start = std::chrono::steady_clock::now();
      const auto report = solve(instance, solver);
      times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
      row.iterations = report.iterations;
      row.converged = report.converged;
    }
    row.admm_median_s = median(times);
    row.admm_per_iter_s = row.admm_median_s / double(std::max<long>(row.iterations, 1));
    if (options.with_oracle && n <= options.oracle_max_elements) {
      std::vector<double> oracle_times;
      for (int r = 0; r < repeats; ++r) {
        const auto start = std::chrono::steady_clock::now();
        (void)oracle_solve(instance, options.oracle);
        oracle_times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
      }
      row.oracle_median_s = median(oracle_times);
    }
    rows.push_back(row);
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "M,N,iterations,converged,admm_time_s,admm_per_iter_s,oracle_time_s\n";
  for (const auto& r : rows) {
    out += std::to_string(r.num_sidelobes) + ',' + std::to_string(r.num_elements) + ',' +
           std::to_string(r.iterations) + ',' + (r.converged ? "1" : "0") + ',' + fixed9(r.admm_median_s) + ',' +
           fixed9(r.admm_per_iter_s) + ',' + (r.oracle_median_s ? fixed9(*r.oracle_median_s) : std::string()) + '\n';
  }
  return out;
}

std::vector<CompareRow> run_compare(const Scenario& base, const std::vector<double>& u_max_list, double phi_max_deg,
                                    std::uint64_t seed, const OracleConfig& l2_oracle) {
  validate_scenario(base);
  const AngleGrid grid = scenario_grid(base);
  const Index n = base.geometry.num_elements;
  const auto nominal_instance = build_instance(base.geometry, grid, DiskRadii<double>::zero(n));
  const auto nominal = solve(nominal_instance, base.solver);

  std::vector<CompareRow> rows;
  for (double u_max : u_max_list) {
    const auto model = random_uncertainty<double>(n, u_max, deg_to_rad(phi_max_deg), seed);
    const auto radii = disk_radii(model);
    const auto instance = build_instance(base.geometry, grid, radii);

    CompareRow row;
    row.u_max = u_max;
    row.phi_max_deg = phi_max_deg;
    row.delta_max = radii.delta.maxCoeff();
    row.epsilon = radii.sphere_radius();

    const auto proposed = solve(instance, base.solver);
    row.proposed_iterations = proposed.iterations;
    row.proposed_converged = proposed.converged;
    row.proposed_db = relative_worst_sidelobe_db(proposed.w_opt, instance, radii);

    const auto l2 = oracle_solve(instance, Regularizer<double>::sphere(row.epsilon), l2_oracle);
    row.l2_ok = l2.ok;
    row.l2_db = l2.ok ? relative_worst_sidelobe_db(l2.w, instance, radii) : std::numeric_limits<double>::infinity();

    row.nominal_db = relative_worst_sidelobe_db(nominal.w_opt, instance, radii);
    rows.push_back(row);
  }
  return rows;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
  std::string out =
      "u_max,phi_max_deg,delta_max,epsilon,proposed_db,l2_db,nominal_db,proposed_iterations,proposed_converged\n";
  for (const auto& r : rows) {
    out += fixed9(r.u_max) + ',' + fixed9(r.phi_max_deg) + ',' + fixed9(r.delta_max) + ',' + fixed9(r.epsilon) + ',' +
           fixed9(r.proposed_db) + ',' + fixed9(r.l2_db) + ',' + fixed9(r.nominal_db) + ',' +
           std::to_string(r.proposed_iterations) + ',' + (r.proposed_converged ? "1" : "0") + '\n';
  }
  return out;
}

}  // namespace robeam
