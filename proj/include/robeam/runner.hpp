#ifndef ROBEAM_RUNNER_HPP
#define ROBEAM_RUNNER_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "robeam/admm.hpp"
#include "robeam/oracle.hpp"
#include "robeam/pattern.hpp"
#include "robeam/scenario.hpp"

namespace robeam {

struct RunArtifacts {
  ProblemInstance<double> instance;
  SolveReport<double> report;
  PatternSweep<double> pattern;
  std::filesystem::path pattern_path;
  std::filesystem::path report_path;
};

/// Builds the instance, solves it, sweeps the pattern and writes both files into out_dir.
RunArtifacts run_synthesis(const Scenario& scenario, const std::filesystem::path& out_dir,
                           std::optional<std::uint64_t> seed_override = {});

/// Columns: angle_deg, nominal, worst_elementwise, worst_sphere and their dB values.
std::string pattern_csv(const PatternSweep<double>& pattern);
std::string report_json(const SolveReport<double>& report, const PatternSweep<double>& pattern);

/// M side-lobe angles k*180/M, k = 0..M, without the 90 degree main lobe (or
/// without 180 when M is odd and 90 is not on the lattice).
AngleGrid bench_grid(Index num_sidelobes);
ProblemInstance<double> bench_instance(Index num_sidelobes, Index num_elements, double delta);

struct BenchOptions {
  SolverConfig solver;
  bool with_oracle = true;
  Index oracle_max_elements = 32;
  OracleConfig oracle;
};

struct BenchRow {
  Index num_sidelobes = 0;
  Index num_elements = 0;
  long iterations = 0;
  bool converged = false;
  double admm_median_s = 0.0;
  double admm_per_iter_s = 0.0;
  std::optional<double> oracle_median_s;
};

std::vector<BenchRow> run_bench(const std::vector<std::pair<Index, Index>>& pairs, double delta, int repeats,
                                const BenchOptions& options = {});
std::string bench_csv(const std::vector<BenchRow>& rows);

struct CompareRow {
  double u_max = 0.0;
  double phi_max_deg = 0.0;
  double delta_max = 0.0;
  double epsilon = 0.0;
  double proposed_db = 0.0;  // worst-case side-lobe level relative to the worst-case main lobe
  double l2_db = 0.0;
  double nominal_db = 0.0;
  long proposed_iterations = 0;
  bool proposed_converged = false;
  bool l2_ok = false;
};

/// For each u_max, draws bounds with the given seed, then designs (a) the
/// element-wise robust beamformer by ADMM, (b) the sphere-model beamformer with
/// eps = ||delta||_2 by the reference subgradient solver, and (c) the nominal
/// beamformer by ADMM with delta = 0. All three are scored under the
/// element-wise worst case.
std::vector<CompareRow> run_compare(const Scenario& base, const std::vector<double>& u_max_list, double phi_max_deg,
                                    std::uint64_t seed, const OracleConfig& l2_oracle = {});
std::string compare_csv(const std::vector<CompareRow>& rows);

double median(std::vector<double> values);

}  // namespace robeam

#endif  // ROBEAM_RUNNER_HPP
