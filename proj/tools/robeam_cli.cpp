#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "robeam/runner.hpp"

namespace {

constexpr int kExitConverged = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotConverged = 2;

std::vector<std::pair<robeam::Index, robeam::Index>> parse_pairs(const std::vector<std::string>& tokens) {
  std::vector<std::pair<robeam::Index, robeam::Index>> pairs;
  for (const auto& tok : tokens) {
    const auto sep = tok.find_first_of(",:x");
    if (sep == std::string::npos) throw CLI::ValidationError("--pairs", "expected M,N but got '" + tok + "'");
    try {
      pairs.emplace_back(std::stol(tok.substr(0, sep)), std::stol(tok.substr(sep + 1)));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--pairs", "expected M,N but got '" + tok + "'");
    }
  }
  return pairs;
}

void emit(const std::string& text, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << text;
  std::cout << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust array pattern synthesis under element-wise amplitude/phase uncertainty"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  app.add_option("--out-dir", out_dir, "Directory for output files")->capture_default_str();
  app.add_option("--seed", seed, "Override the random seed of the scenario");

  auto* synth = app.add_subcommand("synth", "Solve a scenario and write the pattern table and solve report");
  std::string synth_path;
  synth->add_option("scenario", synth_path, "Scenario file (JSON)")->required();

  auto* bench = app.add_subcommand("bench", "Time ADMM (and the reference solver at desk scale) over (M, N) pairs");
  std::vector<std::string> pair_tokens{"30,16", "60,30", "90,30", "180,80", "360,200"};
  double bench_delta = 0.15;
  int repeats = 3;
  bool no_oracle = false;
  std::string bench_file = "bench.csv";
  bench->add_option("--pairs", pair_tokens, "Side-lobe count and element count as M,N")->capture_default_str();
  bench->add_option("--delta", bench_delta, "Disk radius used for every element")->capture_default_str();
  bench->add_option("--repeats", repeats, "Timed repetitions per pair (median reported)")->capture_default_str();
  bench->add_flag("--no-oracle", no_oracle, "Skip the reference solver timings");
  bench->add_option("--output", bench_file, "File name inside --out-dir")->capture_default_str();

  auto* compare = app.add_subcommand("compare", "Worst-case side-lobe levels: proposed vs l2 vs nominal designs");
  std::string compare_path;
  std::vector<double> u_max_list{0.12, 0.19, 0.26, 0.33, 0.41};
  double phi_max = 5.0;
  std::string compare_file = "compare.csv";
  compare->add_option("scenario", compare_path, "Base scenario file (JSON)")->required();
  compare->add_option("--u-max", u_max_list, "Amplitude bounds to sweep")->capture_default_str();
  compare->add_option("--phi-max", phi_max, "Phase bound in degrees")->capture_default_str();
  compare->add_option("--output", compare_file, "File name inside --out-dir")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*synth) {
      const auto scenario = robeam::load_scenario(synth_path);
      const auto art = robeam::run_synthesis(scenario, out_dir, seed);
      std::printf("converged=%d iterations=%ld objective=%.9f peak_worst_case_db=%.6f time_s=%.4f\n",
                  int(art.report.converged), art.report.iterations, art.report.objective_direct,
                  art.pattern.summary.peak_worst_case_db, art.report.wall_time);
      std::printf("wrote %s and %s\n", art.pattern_path.string().c_str(), art.report_path.string().c_str());
      return art.report.converged ? kExitConverged : kExitNotConverged;
    }
    if (*bench) {
      robeam::BenchOptions options;
      options.with_oracle = !no_oracle;
      const auto rows = robeam::run_bench(parse_pairs(pair_tokens), bench_delta, repeats, options);
      emit(robeam::bench_csv(rows), std::filesystem::path(out_dir) / bench_file);
      for (const auto& r : rows)
        if (!r.converged) return kExitNotConverged;
      return kExitConverged;
    }
    if (*compare) {
      const auto scenario = robeam::load_scenario(compare_path);
      std::uint64_t compare_seed = seed.value_or(0);
      if (!seed)
        if (const auto* r = std::get_if<robeam::RandomSpec>(&scenario.uncertainty)) compare_seed = r->seed;
      const auto rows = robeam::run_compare(scenario, u_max_list, phi_max, compare_seed);
      emit(robeam::compare_csv(rows), std::filesystem::path(out_dir) / compare_file);
      for (const auto& r : rows)
        if (!r.proposed_converged) return kExitNotConverged;
      return kExitConverged;
    }
  } catch (const robeam::ScenarioError& e) {
    std::cerr << "scenario error at " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::logic_error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
