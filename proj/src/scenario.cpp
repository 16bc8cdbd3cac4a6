#include "robeam/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "robeam/array_model.hpp"

namespace robeam {

namespace {

using json = nlohmann::json;

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line, col = 1;
    else ++col;
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ScenarioError(path_.empty() ? "/" : path_, "expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  void reject_unknown(std::initializer_list<const char*> known) const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      bool ok = false;
      for (const char* k : known) ok = ok || it.key() == k;
      if (!ok) throw ScenarioError(field(it.key()), "unknown field");
    }
  }

  Reader object(const std::string& key) const { return Reader(require(key), field(key)); }

  double number(const std::string& key) const {
    const json& v = require(key);
    if (!v.is_number()) throw ScenarioError(field(key), "expected a number");
    return v.get<double>();
  }

  double number_or(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  long integer(const std::string& key) const {
    const json& v = require(key);
    if (!v.is_number_integer()) throw ScenarioError(field(key), "expected an integer");
    return v.get<long>();
  }

  std::uint64_t unsigned_integer(const std::string& key) const {
    const json& v = require(key);
    if (!v.is_number_unsigned()) throw ScenarioError(field(key), "expected a nonnegative integer");
    return v.get<std::uint64_t>();
  }

  std::string string_or(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_string()) throw ScenarioError(field(key), "expected a string");
    return v.get<std::string>();
  }

  /// Array of numbers; a bare number is broadcast to `broadcast` entries when nonzero.
  std::vector<double> numbers(const std::string& key, std::size_t broadcast = 0) const {
    const json& v = require(key);
    if (v.is_number() && broadcast > 0) return std::vector<double>(broadcast, v.get<double>());
    if (!v.is_array()) throw ScenarioError(field(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ScenarioError(field(key) + "/" + std::to_string(i), "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  const json& raw(const std::string& key) const { return require(key); }
  std::string field(const std::string& key) const { return path_ + "/" + key; }

 private:
  const json& require(const std::string& key) const {
    if (!node_.contains(key)) throw ScenarioError(field(key), "missing required field");
    return node_.at(key);
  }

  const json& node_;
  std::string path_;
};

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(line_col(text, e.byte == 0 ? 0 : e.byte - 1), "malformed scenario file");
  }

  Scenario sc;
  const Reader top(root, "");
  top.reject_unknown({"geometry", "grid", "uncertainty", "solver", "output"});

  const Reader geo = top.object("geometry");
  geo.reject_unknown({"num_elements", "element_spacing"});
  sc.geometry.num_elements = geo.integer("num_elements");
  sc.geometry.element_spacing = geo.number_or("element_spacing", 0.5);
  const auto n_el = static_cast<std::size_t>(std::max<long>(sc.geometry.num_elements, 0));

  const Reader grid = top.object("grid");
  grid.reject_unknown({"mainlobe_deg", "sidelobe_ranges"});
  sc.mainlobe_deg = grid.number("mainlobe_deg");
  const json& ranges = grid.raw("sidelobe_ranges");
  if (!ranges.is_array()) throw ScenarioError(grid.field("sidelobe_ranges"), "expected an array of [start, stop, step]");
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const std::string where = grid.field("sidelobe_ranges") + "/" + std::to_string(i);
    const json& r = ranges[i];
    if (!r.is_array() || r.size() != 3 || !r[0].is_number() || !r[1].is_number() || !r[2].is_number())
      throw ScenarioError(where, "expected [start, stop, step] in degrees");
    sc.sidelobe_ranges.push_back({r[0].get<double>(), r[1].get<double>(), r[2].get<double>()});
  }

  const Reader unc = top.object("uncertainty");
  unc.reject_unknown({"bounds", "random", "radii"});
  const int variants = int(unc.has("bounds")) + int(unc.has("random")) + int(unc.has("radii"));
  if (variants != 1)
    throw ScenarioError("/uncertainty", "exactly one of \"bounds\", \"random\" or \"radii\" must be given");
  if (unc.has("bounds")) {
    const Reader b = unc.object("bounds");
    b.reject_unknown({"amp_bounds", "phase_bounds_deg"});
    sc.uncertainty = BoundsSpec{b.numbers("amp_bounds", n_el), b.numbers("phase_bounds_deg", n_el)};
  } else if (unc.has("random")) {
    const Reader r = unc.object("random");
    r.reject_unknown({"u_max", "phi_max_deg", "seed"});
    sc.uncertainty = RandomSpec{r.number("u_max"), r.number("phi_max_deg"), r.unsigned_integer("seed")};
  } else {
    const Reader r = unc.object("radii");
    r.reject_unknown({"delta"});
    sc.uncertainty = RadiiSpec{r.numbers("delta", n_el)};
  }

  if (top.has("solver")) {
    const Reader s = top.object("solver");
    s.reject_unknown({"rho", "tol", "feas_tol", "max_iter"});
    sc.solver.rho = s.number_or("rho", sc.solver.rho);
    sc.solver.tol = s.number_or("tol", sc.solver.tol);
    sc.solver.feas_tol = s.number_or("feas_tol", sc.solver.feas_tol);
    if (s.has("max_iter")) sc.solver.max_iter = s.integer("max_iter");
  }
  if (top.has("output")) {
    const Reader o = top.object("output");
    o.reject_unknown({"pattern_csv", "report"});
    sc.output.pattern_csv = o.string_or("pattern_csv", sc.output.pattern_csv);
    sc.output.report = o.string_or("report", sc.output.report);
  }

  validate_scenario(sc);
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path.string(), "cannot open scenario file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::string serialize_scenario(const Scenario& sc) {
  json root;
  root["geometry"] = {{"num_elements", sc.geometry.num_elements}, {"element_spacing", sc.geometry.element_spacing}};
  json ranges = json::array();
  for (const auto& r : sc.sidelobe_ranges) ranges.push_back({r.start, r.stop, r.step});
  root["grid"] = {{"mainlobe_deg", sc.mainlobe_deg}, {"sidelobe_ranges", ranges}};
  std::visit(
      [&](const auto& spec) {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, BoundsSpec>)
          root["uncertainty"]["bounds"] = {{"amp_bounds", spec.amp_bounds}, {"phase_bounds_deg", spec.phase_bounds_deg}};
        else if constexpr (std::is_same_v<T, RandomSpec>)
          root["uncertainty"]["random"] = {{"u_max", spec.u_max}, {"phi_max_deg", spec.phi_max_deg}, {"seed", spec.seed}};
        else
          root["uncertainty"]["radii"] = {{"delta", spec.delta}};
      },
      sc.uncertainty);
  root["solver"] = {{"rho", sc.solver.rho}, {"tol", sc.solver.tol}, {"feas_tol", sc.solver.feas_tol},
                    {"max_iter", sc.solver.max_iter}};
  root["output"] = {{"pattern_csv", sc.output.pattern_csv}, {"report", sc.output.report}};
  return root.dump(2) + "\n";
}

void validate_scenario(const Scenario& sc) {
  const auto wrap = [](const std::string& where, auto&& fn) {
    try {
      fn();
    } catch (const std::logic_error& e) {
      throw ScenarioError(where, e.what());
    }
  };
  wrap("/geometry", [&] { sc.geometry.validate(); });
  wrap("/grid", [&] { scenario_grid(sc); });
  const auto n_el = static_cast<std::size_t>(sc.geometry.num_elements);
  if (const auto* b = std::get_if<BoundsSpec>(&sc.uncertainty)) {
    if (b->amp_bounds.size() != n_el || b->phase_bounds_deg.size() != n_el)
      throw ScenarioError("/uncertainty/bounds", "expected one amplitude and one phase bound per element");
    for (std::size_t i = 0; i < n_el; ++i) {
      if (!(b->amp_bounds[i] >= 0.0 && b->amp_bounds[i] < 1.0))
        throw ScenarioError("/uncertainty/bounds/amp_bounds/" + std::to_string(i), "amplitude bound must lie in [0, 1)");
      if (!(b->phase_bounds_deg[i] >= 0.0 && b->phase_bounds_deg[i] < 90.0))
        throw ScenarioError("/uncertainty/bounds/phase_bounds_deg/" + std::to_string(i),
                            "phase bound must lie in [0, 90) degrees");
    }
  } else if (const auto* r = std::get_if<RandomSpec>(&sc.uncertainty)) {
    if (!(r->u_max >= 0.0 && r->u_max < 1.0)) throw ScenarioError("/uncertainty/random/u_max", "must lie in [0, 1)");
    if (!(r->phi_max_deg >= 0.0 && r->phi_max_deg < 90.0))
      throw ScenarioError("/uncertainty/random/phi_max_deg", "must lie in [0, 90) degrees");
  } else {
    const auto& d = std::get<RadiiSpec>(sc.uncertainty).delta;
    if (d.size() != n_el) throw ScenarioError("/uncertainty/radii/delta", "expected one radius per element");
    for (std::size_t i = 0; i < n_el; ++i)
      if (!(d[i] >= 0.0) || !std::isfinite(d[i]))
        throw ScenarioError("/uncertainty/radii/delta/" + std::to_string(i), "radius must be nonnegative");
  }
  wrap("/solver", [&] { sc.solver.validate(); });
}

AngleGrid scenario_grid(const Scenario& sc) { return grid_from_spec(sc.mainlobe_deg, sc.sidelobe_ranges); }

DiskRadii<double> scenario_radii(const Scenario& sc, std::optional<std::uint64_t> seed_override) {
  const Index n = sc.geometry.num_elements;
  if (const auto* b = std::get_if<BoundsSpec>(&sc.uncertainty)) {
    RealVector<double> amp(n), phase(n);
    for (Index i = 0; i < n; ++i) {
      amp(i) = b->amp_bounds[std::size_t(i)];
      phase(i) = deg_to_rad(b->phase_bounds_deg[std::size_t(i)]);
    }
    return disk_radii(UncertaintyModel<double>(amp, phase));
  }
  if (const auto* r = std::get_if<RandomSpec>(&sc.uncertainty)) {
    return disk_radii(random_uncertainty<double>(n, r->u_max, deg_to_rad(r->phi_max_deg), seed_override.value_or(r->seed)));
  }
  const auto& d = std::get<RadiiSpec>(sc.uncertainty).delta;
  return DiskRadii<double>(Eigen::Map<const RealVector<double>>(d.data(), Index(d.size())));
}

}  // namespace robeam
