#ifndef ROBEAM_SCENARIO_HPP
#define ROBEAM_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "robeam/admm.hpp"
#include "robeam/problem.hpp"

namespace robeam {

/// Per-element bounds given explicitly; phases in degrees.
struct BoundsSpec {
  std::vector<double> amp_bounds;
  std::vector<double> phase_bounds_deg;
  friend bool operator==(const BoundsSpec&, const BoundsSpec&) = default;
};

/// Bounds drawn uniformly from [0, u_max] x [0, phi_max_deg].
struct RandomSpec {
  double u_max = 0.0;
  double phi_max_deg = 0.0;
  std::uint64_t seed = 0;
  friend bool operator==(const RandomSpec&, const RandomSpec&) = default;
};

/// Disk radii given directly.
struct RadiiSpec {
  std::vector<double> delta;
  friend bool operator==(const RadiiSpec&, const RadiiSpec&) = default;
};

using UncertaintySpec = std::variant<BoundsSpec, RandomSpec, RadiiSpec>;

struct OutputSpec {
  std::string pattern_csv = "pattern.csv";
  std::string report = "report.json";
  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct Scenario {
  ArrayGeometry geometry;
  double mainlobe_deg = 90.0;
  std::vector<AngleRange> sidelobe_ranges;
  UncertaintySpec uncertainty = RadiiSpec{};
  SolverConfig solver;
  OutputSpec output;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Parse or validation failure. `where` names a line/column or a field path.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);
std::string serialize_scenario(const Scenario& scenario);

/// Checks every value against the model bounds without solving anything.
void validate_scenario(const Scenario& scenario);

AngleGrid scenario_grid(const Scenario& scenario);

/// Disk radii for the scenario's uncertainty spec; `seed_override` replaces a random spec's seed.
DiskRadii<double> scenario_radii(const Scenario& scenario, std::optional<std::uint64_t> seed_override = {});

}  // namespace robeam

#endif  // ROBEAM_SCENARIO_HPP
