#pragma once
// Project configuration: one JSON file drives every pipeline stage.  The
// schema is strict — unknown keys are rejected by name so typos cannot
// silently fall back to defaults — and every path named in the file must
// exist at load time.  Paths are resolved relative to the config file's
// directory.
//
// The canonical form of a loaded config (defaults materialized, overrides
// applied, keys sorted) feeds a deterministic digest; two runs agree on
// their digest exactly when they resolved the same effective configuration.

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ghp/borefield_sizing.hpp"
#include "ghp/common.hpp"
#include "ghp/heat_pump.hpp"
#include "ghp/hybrid_optimizer.hpp"
#include "ghp/io.hpp"
#include "ghp/load_model.hpp"
#include "ghp/plant_sim.hpp"

namespace ghp {

using Json = nlohmann::json;

// Accepts the canonical spellings to_string() emits plus hyphenated aliases.
inline SourceKind parse_source_kind(const std::string& s) {
  if (s == "gshp-only") return SourceKind::gshp_only;
  if (s == "ashp-only") return SourceKind::ashp_only;
  if (s == "gshp+ashp" || s == "gshp-plus-ashp")
    return SourceKind::gshp_plus_ashp;
  if (s == "gshp+heater" || s == "gshp-plus-heater")
    return SourceKind::gshp_plus_heater;
  fail(ErrorKind::invalid_argument, "unknown source kind: '" + s + "'");
}

// One simulated design variant; the case matrix mirrors a study table where
// borehole count and machine capacity vary per option.
struct CaseSpec {
  std::string name;
  SourceKind kind = SourceKind::gshp_only;
  int boreholes = 0;  // ignored by air-only cases
  double spacing_m = 6.0;
  double depth_m = 150.0;
  std::optional<double> loop_low_c;   // per-case assist band override
  std::optional<double> loop_high_c;
  std::optional<double> gshp_heating_kw;  // synthetic-machine size override
  std::optional<double> gshp_cooling_kw;
};

struct ConfigPaths {
  std::string profiles;   // donor pair, `hour,heating_kw,cooling_kw`
  std::string weather;    // `hour,outdoor_drybulb_c`
  std::string buildings;  // metered records for target derivation
  std::string gshp_heating_map;  // catalogue CSVs; synthetic maps when empty
  std::string gshp_cooling_map;
  std::string ashp_heating_map;
  std::string ashp_cooling_map;
};

struct TargetSpec {
  std::optional<BenchmarkTargets> heating;
  std::optional<BenchmarkTargets> cooling;
};

struct PlantParams {
  double gshp_heating_kw = 75.0;
  double gshp_cooling_kw = 55.0;
  double ashp_heating_kw = 80.0;
  double ashp_cooling_kw = 55.0;
  double dt_s = 300.0;
  double pump_kw_per_kg_s = 0.03;
  int borehole_segments = 8;
};

struct ProjectConfig {
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  ConfigPaths paths;
  TargetSpec targets;
  BenchmarkParams benchmarks;
  GroundProperties ground;
  PulseSchedule pulses;
  CostParams costs;
  CopSet cops;
  DesignConditions design;  // COPs and pipe are injected from `cops`/`pipe`
  PipeGeometry pipe;
  ControlConfig control;
  BuildingNode building;
  PlantParams plant;
  std::vector<CaseSpec> cases;

  std::filesystem::path base_dir;  // config file's directory, for resolution

  std::string resolve(const std::string& rel) const {
    if (rel.empty()) return {};
    const std::filesystem::path p(rel);
    if (p.is_absolute()) return p.lexically_normal().string();
    return (base_dir / p).lexically_normal().string();
  }

  const CaseSpec& find_case(const std::string& name) const {
    for (const CaseSpec& c : cases)
      if (c.name == name) return c;
    fail(ErrorKind::invalid_argument,
         "unknown case '" + name + "' (config defines " +
             std::to_string(cases.size()) + " cases)");
  }

  DesignConditions design_conditions() const {
    DesignConditions out = design;
    out.cop_cooling = cops.gshp_cooling;
    out.cop_heating = cops.gshp_heating;
    out.pipe = pipe;
    return out;
  }

  // Machine models: fitted from a catalogue CSV when a map path is given,
  // otherwise the synthetic catalogue at the configured size.  The synthetic
  // scaffold supplies the reference state either way.
  HeatPumpModel machine(const std::string& map_path_rel,
                        HeatPumpModel scaffold) const {
    if (map_path_rel.empty()) return scaffold;
    const auto rows = read_performance_map_csv(resolve(map_path_rel));
    return fit_performance_map(rows, scaffold).model;
  }
  HeatPumpModel gshp_heating_model(double kw) const {
    return machine(paths.gshp_heating_map, synthetic_gshp_heating(kw * 1e3));
  }
  HeatPumpModel gshp_cooling_model(double kw) const {
    return machine(paths.gshp_cooling_map, synthetic_gshp_cooling(kw * 1e3));
  }
  HeatPumpModel ashp_heating_model() const {
    return machine(paths.ashp_heating_map,
                   synthetic_ashp_heating(plant.ashp_heating_kw * 1e3));
  }
  HeatPumpModel ashp_cooling_model() const {
    return machine(paths.ashp_cooling_map,
                   synthetic_ashp_cooling(plant.ashp_cooling_kw * 1e3));
  }

  PlantConfig plant_config(const CaseSpec& c) const {
    require(!(c.gshp_heating_kw && !paths.gshp_heating_map.empty()) &&
                !(c.gshp_cooling_kw && !paths.gshp_cooling_map.empty()),
            ErrorKind::invalid_argument,
            "case '" + c.name +
                "': capacity overrides require synthetic machines, but a "
                "performance-map path is configured");
    PlantConfig pc;
    pc.building = building;
    pc.control = control;
    if (c.loop_low_c) pc.control.loop_low_c = *c.loop_low_c;
    if (c.loop_high_c) pc.control.loop_high_c = *c.loop_high_c;
    pc.source.kind = c.kind;
    if (pc.source.uses_ground())
      pc.source.borefield =
          BorefieldLayout::near_square(c.boreholes, c.spacing_m, c.depth_m);
    pc.gshp_heating = gshp_heating_model(
        c.gshp_heating_kw.value_or(plant.gshp_heating_kw));
    pc.gshp_cooling = gshp_cooling_model(
        c.gshp_cooling_kw.value_or(plant.gshp_cooling_kw));
    pc.ashp_heating = ashp_heating_model();
    pc.ashp_cooling = ashp_cooling_model();
    pc.ground = ground;
    pc.pipe = pipe;
    pc.dt_s = plant.dt_s;
    pc.borehole_segments = plant.borehole_segments;
    pc.pump_power_kw_per_kg_s = plant.pump_kw_per_kg_s;
    return pc;
  }

  void validate() const {
    for (const std::string& p :
         {paths.profiles, paths.weather, paths.buildings,
          paths.gshp_heating_map, paths.gshp_cooling_map,
          paths.ashp_heating_map, paths.ashp_cooling_map}) {
      if (p.empty()) continue;
      require(std::filesystem::exists(resolve(p)), ErrorKind::invalid_argument,
              "config: referenced path does not exist: '" + resolve(p) + "'");
    }
    benchmarks.validate();
    ground.validate();
    pulses.validate();
    costs.validate();
    cops.validate();
    design.validate();
    pipe.validate(ground.borehole_diameter_m);
    if (targets.heating) validate_targets(*targets.heating, "heating targets");
    if (targets.cooling) validate_targets(*targets.cooling, "cooling targets");
    if (!cases.empty()) {
      control.validate();
      building.validate();
      require(plant.gshp_heating_kw > 0.0 && plant.gshp_cooling_kw > 0.0 &&
                  plant.ashp_heating_kw > 0.0 && plant.ashp_cooling_kw > 0.0,
              ErrorKind::invalid_argument,
              "plant: machine sizes must be > 0 kW");
      require(plant.dt_s > 0.0 && plant.borehole_segments >= 1 &&
                  plant.pump_kw_per_kg_s >= 0.0,
              ErrorKind::invalid_argument, "plant: bad time step or pump");
    }
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const CaseSpec& c = cases[i];
      require(!c.name.empty(), ErrorKind::invalid_argument,
              "case " + std::to_string(i) + ": name is empty");
      // Case names become output filenames; keep them filesystem-safe.
      for (char ch : c.name)
        require(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' ||
                    ch == '-',
                ErrorKind::invalid_argument,
                "case '" + c.name +
                    "': names may use only letters, digits, '_' and '-'");
      for (std::size_t j = 0; j < i; ++j)
        require(cases[j].name != c.name, ErrorKind::invalid_argument,
                "duplicate case name '" + c.name + "'");
      require(c.spacing_m > 0.0 && c.depth_m > 0.0,
              ErrorKind::invalid_argument,
              "case '" + c.name + "': spacing and depth must be > 0");
      if (c.kind != SourceKind::ashp_only)
        require(c.boreholes >= 1, ErrorKind::invalid_argument,
                "case '" + c.name +
                    "': ground-coupled kinds need boreholes >= 1");
      if (c.gshp_heating_kw)
        require(*c.gshp_heating_kw > 0.0, ErrorKind::invalid_argument,
                "case '" + c.name + "': gshp_heating_kw must be > 0");
      if (c.gshp_cooling_kw)
        require(*c.gshp_cooling_kw > 0.0, ErrorKind::invalid_argument,
                "case '" + c.name + "': gshp_cooling_kw must be > 0");
    }
  }
};

namespace detail {

inline void check_keys(const Json& obj, const char* section,
                       std::initializer_list<std::string_view> allowed) {
  require(obj.is_object(), ErrorKind::invalid_argument,
          std::string("config: '") + section + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool ok = false;
    for (std::string_view a : allowed)
      if (key == a) {
        ok = true;
        break;
      }
    require(ok, ErrorKind::invalid_argument,
            std::string("config: unknown key '") + key + "' in '" + section +
                "'");
  }
}

inline void get_num(const Json& obj, const char* section, const char* key,
                    double& out) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  require(it->is_number(), ErrorKind::invalid_argument,
          std::string("config: '") + section + "." + key +
              "' must be a number");
  out = it->get<double>();
}

inline void get_opt_num(const Json& obj, const char* section, const char* key,
                        std::optional<double>& out) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  require(it->is_number(), ErrorKind::invalid_argument,
          std::string("config: '") + section + "." + key +
              "' must be a number");
  out = it->get<double>();
}

inline void get_int(const Json& obj, const char* section, const char* key,
                    int& out) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  require(it->is_number_integer(), ErrorKind::invalid_argument,
          std::string("config: '") + section + "." + key +
              "' must be an integer");
  out = it->get<int>();
}

inline void get_str(const Json& obj, const char* section, const char* key,
                    std::string& out) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  require(it->is_string(), ErrorKind::invalid_argument,
          std::string("config: '") + section + "." + key +
              "' must be a string");
  out = it->get<std::string>();
}

inline BenchmarkTargets parse_targets(const Json& j, const char* section) {
  check_keys(j, section, {"annual_kwh", "peak_kw"});
  BenchmarkTargets t;
  get_num(j, section, "annual_kwh", t.annual_energy_kwh);
  get_num(j, section, "peak_kw", t.peak_kw);
  return t;
}

}  // namespace detail

inline ProjectConfig parse_project_config(
    const Json& j, const std::filesystem::path& base_dir) {
  detail::check_keys(
      j, "config",
      {"seed", "output_dir", "paths", "targets", "benchmarks", "ground",
       "pulses", "costs", "cops", "design", "pipe", "control", "building",
       "plant", "cases"});
  ProjectConfig cfg;
  cfg.base_dir = base_dir;

  if (auto it = j.find("seed"); it != j.end() && !it->is_null()) {
    require(it->is_number_unsigned(), ErrorKind::invalid_argument,
            "config: 'seed' must be a nonnegative integer");
    cfg.seed = it->get<std::uint64_t>();
  }
  detail::get_str(j, "config", "output_dir", cfg.output_dir);
  require(!cfg.output_dir.empty(), ErrorKind::invalid_argument,
          "config: 'output_dir' must not be empty");

  if (auto it = j.find("paths"); it != j.end() && !it->is_null()) {
    detail::check_keys(*it, "paths",
                       {"profiles", "weather", "buildings", "gshp_heating_map",
                        "gshp_cooling_map", "ashp_heating_map",
                        "ashp_cooling_map"});
    detail::get_str(*it, "paths", "profiles", cfg.paths.profiles);
    detail::get_str(*it, "paths", "weather", cfg.paths.weather);
    detail::get_str(*it, "paths", "buildings", cfg.paths.buildings);
    detail::get_str(*it, "paths", "gshp_heating_map",
                    cfg.paths.gshp_heating_map);
    detail::get_str(*it, "paths", "gshp_cooling_map",
                    cfg.paths.gshp_cooling_map);
    detail::get_str(*it, "paths", "ashp_heating_map",
                    cfg.paths.ashp_heating_map);
    detail::get_str(*it, "paths", "ashp_cooling_map",
                    cfg.paths.ashp_cooling_map);
  }

  if (auto it = j.find("targets"); it != j.end() && !it->is_null()) {
    detail::check_keys(*it, "targets", {"heating", "cooling"});
    if (auto h = it->find("heating"); h != it->end() && !h->is_null())
      cfg.targets.heating = detail::parse_targets(*h, "targets.heating");
    if (auto c = it->find("cooling"); c != it->end() && !c->is_null())
      cfg.targets.cooling = detail::parse_targets(*c, "targets.cooling");
  }

  if (auto it = j.find("benchmarks"); it != j.end() && !it->is_null()) {
    detail::check_keys(*it, "benchmarks",
                       {"steam_loss_fraction", "heating_system_efficiency",
                        "seasonal_chiller_cop", "default_cooling_attribution",
                        "cooling_attribution", "peak_diversity"});
    auto& b = cfg.benchmarks;
    detail::get_num(*it, "benchmarks", "steam_loss_fraction",
                    b.steam_loss_fraction);
    detail::get_num(*it, "benchmarks", "heating_system_efficiency",
                    b.heating_system_efficiency);
    detail::get_num(*it, "benchmarks", "seasonal_chiller_cop",
                    b.seasonal_chiller_cop);
    detail::get_num(*it, "benchmarks", "default_cooling_attribution",
                    b.default_cooling_attribution);
    detail::get_num(*it, "benchmarks", "peak_diversity", b.peak_diversity);
    if (auto a = it->find("cooling_attribution");
        a != it->end() && !a->is_null()) {
      require(a->is_object(), ErrorKind::invalid_argument,
              "config: 'benchmarks.cooling_attribution' must be an object");
      for (const auto& [type_name, frac] : a->items()) {
        require(frac.is_number(), ErrorKind::invalid_argument,
                "config: attribution for '" + type_name +
                    "' must be a number");
        b.cooling_attribution_by_type[parse_building_type(type_name)] =
            frac.get<double>();
      }
    }
  }

  if (auto it = j.find("ground"); it != j.end() && !it->is_null()) {
    detail::check_keys(*it, "ground",
                       {"temperature_c", "conductivity_w_mk",
                        "diffusivity_m2_per_day", "grout_conductivity_w_mk",
                        "borehole_diameter_m", "water_table_depth_m"});
    auto& g = cfg.ground;
    detail::get_num(*it, "ground", "temperature_c", g.temperature_c);
    detail::get_num(*it, "ground", "conductivity_w_mk", g.conductivity_w_mk);
    detail::get_num(*it, "ground", "diffusivity_m2_per_day",
                    g.diffusivity_m2_per_day);
    detail::get_num(*it, "ground", "grout_conductivity_w_mk",
                    g.grout_conductivity_w_mk);
    detail::get_num(*it, "ground", "borehole_diameter_m",
                    g.borehole_diameter_m);
    detail::get_num(*it, "ground", "water_table_depth_m",
                    g.water_table_depth_m);
  }

  if (auto it = j.find("pulses"); it != j.end() && !it->is_null()) {
    detail::check_keys(*it, "pulses",
                       {"annual_days", "monthly_days", "daily_days"});
    detail::get_num(*it, "pulses", "annual_days", cfg.pulses.annual_days);
    detail::get_num(*it, "pulses", "monthly_days", cfg.pulses.monthly_days);
    detail::get_num(*it, "pulses", "daily_days", cfg.pulses.daily_days);
  }

  if (auto it = j.find("costs"); it != j.end() && !it->is_null()) {
    detail::check_keys(*it, "costs",
                       {"ghx_unit_cost_per_m", "heat_pump_unit_cost_per_kw",
                        "electricity_price_per_kwh", "interest_rate",
                        "inflation_rate", "horizon_years"});
    auto& c = cfg.costs;
    detail::get_num(*it, "costs", "ghx_unit_cost_per_m", c.ghx_unit_cost_per_m);
    detail::get_num(*it, "costs", "heat_pump_unit_cost_per_kw",
                    c.heat_pump_unit_cost_per_kw);
    detail::get_num(*it, "costs", "electricity_price_per_kwh",
                    c.electricity_price_per_kwh);
    detail::get_num(*it, "costs", "interest_rate", c.interest_rate);
    detail::get_num(*it, "costs", "inflation_rate", c.inflation_rate);
    detail::get_int(*it, "costs", "horizon_years", c.horizon_years);
  }

  if (auto it = j.find("cops"); it != j.end() && !it->is_null()) {
    detail::check_keys(
        *it, "cops",
        {"ashp_heating", "ashp_cooling", "gshp_heating", "gshp_cooling"});
    detail::get_num(*it, "cops", "ashp_heating", cfg.cops.ashp_heating);
    detail::get_num(*it, "cops", "ashp_cooling", cfg.cops.ashp_cooling);
    detail::get_num(*it, "cops", "gshp_heating", cfg.cops.gshp_heating);
    detail::get_num(*it, "cops", "gshp_cooling", cfg.cops.gshp_cooling);
  }

  if (auto it = j.find("design"); it != j.end() && !it->is_null()) {
    detail::check_keys(*it, "design",
                       {"borehole_spacing_m", "borehole_depth_m", "t_wi_c_c",
                        "t_wo_c_c", "t_wi_h_c", "t_wo_h_c",
                        "short_circuit_factor"});
    auto& d = cfg.design;
    detail::get_num(*it, "design", "borehole_spacing_m", d.borehole_spacing_m);
    detail::get_num(*it, "design", "borehole_depth_m", d.borehole_depth_m);
    detail::get_num(*it, "design", "t_wi_c_c", d.t_wi_c_c);
    detail::get_num(*it, "design", "t_wo_c_c", d.t_wo_c_c);
    detail::get_num(*it, "design", "t_wi_h_c", d.t_wi_h_c);
    detail::get_num(*it, "design", "t_wo_h_c", d.t_wo_h_c);
    detail::get_num(*it, "design", "short_circuit_factor",
                    d.short_circuit_factor);
  }

  if (auto it = j.find("pipe"); it != j.end() && !it->is_null()) {
    detail::check_keys(*it, "pipe",
                       {"outer_diameter_m", "inner_diameter_m",
                        "conductivity_w_mk", "shank_spacing_m",
                        "override_r_b_mk_w"});
    auto& p = cfg.pipe;
    detail::get_num(*it, "pipe", "outer_diameter_m", p.outer_diameter_m);
    detail::get_num(*it, "pipe", "inner_diameter_m", p.inner_diameter_m);
    detail::get_num(*it, "pipe", "conductivity_w_mk", p.conductivity_w_mk);
    detail::get_num(*it, "pipe", "shank_spacing_m", p.shank_spacing_m);
    detail::get_opt_num(*it, "pipe", "override_r_b_mk_w", p.override_r_b_mk_w);
  }

  if (auto it = j.find("control"); it != j.end() && !it->is_null()) {
    detail::check_keys(*it, "control",
                       {"cool_on_c", "cool_off_c", "heat_on_c", "heat_off_c",
                        "supply_heating_c", "supply_cooling_c", "loop_high_c",
                        "loop_low_c", "nominal_loop_dt_k"});
    auto& c = cfg.control;
    detail::get_num(*it, "control", "cool_on_c", c.cool_on_c);
    detail::get_num(*it, "control", "cool_off_c", c.cool_off_c);
    detail::get_num(*it, "control", "heat_on_c", c.heat_on_c);
    detail::get_num(*it, "control", "heat_off_c", c.heat_off_c);
    detail::get_num(*it, "control", "supply_heating_c", c.supply_heating_c);
    detail::get_num(*it, "control", "supply_cooling_c", c.supply_cooling_c);
    detail::get_num(*it, "control", "loop_high_c", c.loop_high_c);
    detail::get_num(*it, "control", "loop_low_c", c.loop_low_c);
    detail::get_num(*it, "control", "nominal_loop_dt_k", c.nominal_loop_dt_k);
  }

  if (auto it = j.find("building"); it != j.end() && !it->is_null()) {
    detail::check_keys(*it, "building",
                       {"floor_area_m2", "floor_height_m", "ua_w_per_k",
                        "indoor_temp_c"});
    auto& b = cfg.building;
    detail::get_num(*it, "building", "floor_area_m2", b.floor_area_m2);
    detail::get_num(*it, "building", "floor_height_m", b.floor_height_m);
    detail::get_num(*it, "building", "ua_w_per_k", b.ua_w_per_k);
    detail::get_num(*it, "building", "indoor_temp_c", b.indoor_temp_c);
  }

  if (auto it = j.find("plant"); it != j.end() && !it->is_null()) {
    detail::check_keys(*it, "plant",
                       {"gshp_heating_kw", "gshp_cooling_kw", "ashp_heating_kw",
                        "ashp_cooling_kw", "dt_s", "pump_kw_per_kg_s",
                        "borehole_segments"});
    auto& p = cfg.plant;
    detail::get_num(*it, "plant", "gshp_heating_kw", p.gshp_heating_kw);
    detail::get_num(*it, "plant", "gshp_cooling_kw", p.gshp_cooling_kw);
    detail::get_num(*it, "plant", "ashp_heating_kw", p.ashp_heating_kw);
    detail::get_num(*it, "plant", "ashp_cooling_kw", p.ashp_cooling_kw);
    detail::get_num(*it, "plant", "dt_s", p.dt_s);
    detail::get_num(*it, "plant", "pump_kw_per_kg_s", p.pump_kw_per_kg_s);
    detail::get_int(*it, "plant", "borehole_segments", p.borehole_segments);
  }

  if (auto it = j.find("cases"); it != j.end() && !it->is_null()) {
    require(it->is_array(), ErrorKind::invalid_argument,
            "config: 'cases' must be an array");
    for (const Json& cj : *it) {
      detail::check_keys(cj, "cases[]",
                         {"name", "kind", "boreholes", "spacing_m", "depth_m",
                          "loop_low_c", "loop_high_c", "gshp_heating_kw",
                          "gshp_cooling_kw"});
      CaseSpec c;
      detail::get_str(cj, "cases[]", "name", c.name);
      std::string kind;
      detail::get_str(cj, "cases[]", "kind", kind);
      require(!kind.empty(), ErrorKind::invalid_argument,
              "config: case '" + c.name + "' has no 'kind'");
      c.kind = parse_source_kind(kind);
      detail::get_int(cj, "cases[]", "boreholes", c.boreholes);
      detail::get_num(cj, "cases[]", "spacing_m", c.spacing_m);
      detail::get_num(cj, "cases[]", "depth_m", c.depth_m);
      detail::get_opt_num(cj, "cases[]", "loop_low_c", c.loop_low_c);
      detail::get_opt_num(cj, "cases[]", "loop_high_c", c.loop_high_c);
      detail::get_opt_num(cj, "cases[]", "gshp_heating_kw", c.gshp_heating_kw);
      detail::get_opt_num(cj, "cases[]", "gshp_cooling_kw", c.gshp_cooling_kw);
      cfg.cases.push_back(std::move(c));
    }
  }

  return cfg;
}

// Canonical JSON of the resolved config: every field materialized, optionals
// present only when set, keys emitted sorted by the JSON library.
inline Json to_json(const ProjectConfig& cfg) {
  Json j;
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir;
  j["paths"] = {{"profiles", cfg.paths.profiles},
                {"weather", cfg.paths.weather},
                {"buildings", cfg.paths.buildings},
                {"gshp_heating_map", cfg.paths.gshp_heating_map},
                {"gshp_cooling_map", cfg.paths.gshp_cooling_map},
                {"ashp_heating_map", cfg.paths.ashp_heating_map},
                {"ashp_cooling_map", cfg.paths.ashp_cooling_map}};
  j["targets"] = Json::object();
  if (cfg.targets.heating)
    j["targets"]["heating"] = {
        {"annual_kwh", cfg.targets.heating->annual_energy_kwh},
        {"peak_kw", cfg.targets.heating->peak_kw}};
  if (cfg.targets.cooling)
    j["targets"]["cooling"] = {
        {"annual_kwh", cfg.targets.cooling->annual_energy_kwh},
        {"peak_kw", cfg.targets.cooling->peak_kw}};
  Json attribution = Json::object();
  for (const auto& [type, frac] : cfg.benchmarks.cooling_attribution_by_type)
    attribution[to_string(type)] = frac;
  j["benchmarks"] = {
      {"steam_loss_fraction", cfg.benchmarks.steam_loss_fraction},
      {"heating_system_efficiency", cfg.benchmarks.heating_system_efficiency},
      {"seasonal_chiller_cop", cfg.benchmarks.seasonal_chiller_cop},
      {"default_cooling_attribution",
       cfg.benchmarks.default_cooling_attribution},
      {"cooling_attribution", attribution},
      {"peak_diversity", cfg.benchmarks.peak_diversity}};
  j["ground"] = {
      {"temperature_c", cfg.ground.temperature_c},
      {"conductivity_w_mk", cfg.ground.conductivity_w_mk},
      {"diffusivity_m2_per_day", cfg.ground.diffusivity_m2_per_day},
      {"grout_conductivity_w_mk", cfg.ground.grout_conductivity_w_mk},
      {"borehole_diameter_m", cfg.ground.borehole_diameter_m},
      {"water_table_depth_m", cfg.ground.water_table_depth_m}};
  j["pulses"] = {{"annual_days", cfg.pulses.annual_days},
                 {"monthly_days", cfg.pulses.monthly_days},
                 {"daily_days", cfg.pulses.daily_days}};
  j["costs"] = {
      {"ghx_unit_cost_per_m", cfg.costs.ghx_unit_cost_per_m},
      {"heat_pump_unit_cost_per_kw", cfg.costs.heat_pump_unit_cost_per_kw},
      {"electricity_price_per_kwh", cfg.costs.electricity_price_per_kwh},
      {"interest_rate", cfg.costs.interest_rate},
      {"inflation_rate", cfg.costs.inflation_rate},
      {"horizon_years", cfg.costs.horizon_years}};
  j["cops"] = {{"ashp_heating", cfg.cops.ashp_heating},
               {"ashp_cooling", cfg.cops.ashp_cooling},
               {"gshp_heating", cfg.cops.gshp_heating},
               {"gshp_cooling", cfg.cops.gshp_cooling}};
  j["design"] = {{"borehole_spacing_m", cfg.design.borehole_spacing_m},
                 {"borehole_depth_m", cfg.design.borehole_depth_m},
                 {"t_wi_c_c", cfg.design.t_wi_c_c},
                 {"t_wo_c_c", cfg.design.t_wo_c_c},
                 {"t_wi_h_c", cfg.design.t_wi_h_c},
                 {"t_wo_h_c", cfg.design.t_wo_h_c},
                 {"short_circuit_factor", cfg.design.short_circuit_factor}};
  j["pipe"] = {{"outer_diameter_m", cfg.pipe.outer_diameter_m},
               {"inner_diameter_m", cfg.pipe.inner_diameter_m},
               {"conductivity_w_mk", cfg.pipe.conductivity_w_mk},
               {"shank_spacing_m", cfg.pipe.shank_spacing_m}};
  if (cfg.pipe.override_r_b_mk_w)
    j["pipe"]["override_r_b_mk_w"] = *cfg.pipe.override_r_b_mk_w;
  j["control"] = {{"cool_on_c", cfg.control.cool_on_c},
                  {"cool_off_c", cfg.control.cool_off_c},
                  {"heat_on_c", cfg.control.heat_on_c},
                  {"heat_off_c", cfg.control.heat_off_c},
                  {"supply_heating_c", cfg.control.supply_heating_c},
                  {"supply_cooling_c", cfg.control.supply_cooling_c},
                  {"loop_high_c", cfg.control.loop_high_c},
                  {"loop_low_c", cfg.control.loop_low_c},
                  {"nominal_loop_dt_k", cfg.control.nominal_loop_dt_k}};
  j["building"] = {{"floor_area_m2", cfg.building.floor_area_m2},
                   {"floor_height_m", cfg.building.floor_height_m},
                   {"ua_w_per_k", cfg.building.ua_w_per_k},
                   {"indoor_temp_c", cfg.building.indoor_temp_c}};
  j["plant"] = {{"gshp_heating_kw", cfg.plant.gshp_heating_kw},
                {"gshp_cooling_kw", cfg.plant.gshp_cooling_kw},
                {"ashp_heating_kw", cfg.plant.ashp_heating_kw},
                {"ashp_cooling_kw", cfg.plant.ashp_cooling_kw},
                {"dt_s", cfg.plant.dt_s},
                {"pump_kw_per_kg_s", cfg.plant.pump_kw_per_kg_s},
                {"borehole_segments", cfg.plant.borehole_segments}};
  j["cases"] = Json::array();
  for (const CaseSpec& c : cfg.cases) {
    Json cj = {{"name", c.name},
               {"kind", to_string(c.kind)},
               {"boreholes", c.boreholes},
               {"spacing_m", c.spacing_m},
               {"depth_m", c.depth_m}};
    if (c.loop_low_c) cj["loop_low_c"] = *c.loop_low_c;
    if (c.loop_high_c) cj["loop_high_c"] = *c.loop_high_c;
    if (c.gshp_heating_kw) cj["gshp_heating_kw"] = *c.gshp_heating_kw;
    if (c.gshp_cooling_kw) cj["gshp_cooling_kw"] = *c.gshp_cooling_kw;
    j["cases"].push_back(std::move(cj));
  }
  return j;
}

inline std::string config_digest(const ProjectConfig& cfg) {
  Fnv1a h;
  h.feed(to_json(cfg).dump());
  return hex_digest(h.digest());
}

// Apply one `key.path=value` override to a raw config document.  The value
// is parsed as JSON when possible and kept as a string otherwise; numeric
// path segments index into arrays.
inline void apply_override(Json& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  require(eq != std::string::npos && eq > 0, ErrorKind::invalid_argument,
          "override '" + assignment + "' is not of the form key.path=value");
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  std::vector<std::string> tokens;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= path.size(); ++i) {
    if (i == path.size() || path[i] == '.') {
      require(i > start, ErrorKind::invalid_argument,
              "override '" + assignment + "' has an empty path segment");
      tokens.push_back(path.substr(start, i - start));
      start = i + 1;
    }
  }

  Json* node = &root;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    const std::string& tok = tokens[i];
    const bool numeric = !tok.empty() && tok.find_first_not_of("0123456789") ==
                                             std::string::npos;
    if (node->is_array()) {
      require(numeric, ErrorKind::invalid_argument,
              "override '" + assignment + "': '" + tok +
                  "' must be an array index");
      const std::size_t idx = std::stoul(tok);
      require(idx < node->size(), ErrorKind::invalid_argument,
              "override '" + assignment + "': index " + tok +
                  " is out of range");
      node = &(*node)[idx];
    } else {
      if (!node->is_object()) *node = Json::object();
      node = &(*node)[tok];
    }
  }

  Json value = Json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;  // bare strings stay strings
  const std::string& leaf = tokens.back();
  if (node->is_array()) {
    const bool numeric = !leaf.empty() &&
                         leaf.find_first_not_of("0123456789") ==
                             std::string::npos;
    require(numeric, ErrorKind::invalid_argument,
            "override '" + assignment + "': '" + leaf +
                "' must be an array index");
    const std::size_t idx = std::stoul(leaf);
    require(idx < node->size(), ErrorKind::invalid_argument,
            "override '" + assignment + "': index " + leaf +
                " is out of range");
    (*node)[idx] = std::move(value);
  } else {
    if (!node->is_object()) *node = Json::object();
    (*node)[leaf] = std::move(value);
  }
}

inline ProjectConfig load_project_config(
    const std::string& path, const std::vector<std::string>& overrides = {}) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::io,
          "cannot open config '" + path + "' for reading");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    fail(ErrorKind::invalid_argument,
         "config '" + path + "' is not valid JSON: " + e.what());
  }
  for (const std::string& o : overrides) apply_override(j, o);
  ProjectConfig cfg = parse_project_config(
      j, std::filesystem::absolute(std::filesystem::path(path))
             .parent_path());
  cfg.validate();
  return cfg;
}

}  // namespace ghp
