// Plant simulation: a lumped building served by ground-source and air-source
// heat pumps under banded thermostat control.  The ground loop couples a
// delta-network borehole interior to the aggregated long-term field response;
// electricity is metered per source (heat pumps, electric heater, pumps).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ghp/borefield_sizing.hpp"
#include "ghp/common.hpp"
#include "ghp/ground_response.hpp"
#include "ghp/heat_pump.hpp"
#include "ghp/load_model.hpp"

namespace ghp {

// ---- thermostat ----------------------------------------------------------------------

enum class ThermoMode { sleep, heating, cooling };

inline const char* to_string(ThermoMode m) {
  switch (m) {
    case ThermoMode::sleep: return "sleep";
    case ThermoMode::heating: return "heating";
    case ThermoMode::cooling: return "cooling";
  }
  return "?";
}

// Band thermostat setpoints and hydronic loop setpoints, degrees Celsius.
struct ControlConfig {
  double cool_on_c = 26.0;   // sleep -> cooling above this
  double cool_off_c = 21.0;  // cooling -> sleep at or below this
  double heat_on_c = 19.0;   // sleep -> heating below this
  double heat_off_c = 24.0;  // heating -> sleep at or above this

  double supply_heating_c = 50.0;  // radiator supply water while heating
  double supply_cooling_c = 10.0;  // radiator supply water while cooling

  // Ground-loop comfort band: auxiliary sources join while the loop is
  // outside [loop_low_c, loop_high_c].
  double loop_high_c = 30.0;
  double loop_low_c = 5.0;

  double nominal_loop_dt_k = 5.0;  // design temperature difference for flows

  void validate() const {
    require(heat_on_c < cool_off_c && cool_off_c <= heat_off_c &&
                heat_off_c < cool_on_c,
            ErrorKind::invalid_argument,
            "control: need heat_on < cool_off <= heat_off < cool_on");
    require(loop_low_c < loop_high_c, ErrorKind::invalid_argument,
            "control: need loop_low < loop_high");
    require(nominal_loop_dt_k > 0.0, ErrorKind::invalid_argument,
            "control: nominal loop temperature difference must be > 0");
    require(supply_heating_c > heat_off_c, ErrorKind::invalid_argument,
            "control: heating supply water must sit above the heat-off point");
    require(supply_cooling_c < cool_off_c, ErrorKind::invalid_argument,
            "control: cooling supply water must sit below the cool-off point");
  }
};

// One hysteresis transition of the three-state band thermostat.
inline ThermoMode thermostat_step(ThermoMode mode, double indoor_c,
                                  const ControlConfig& control) {
  require(std::isfinite(indoor_c), ErrorKind::invalid_argument,
          "thermostat: indoor temperature must be finite");
  switch (mode) {
    case ThermoMode::sleep:
      if (indoor_c > control.cool_on_c) return ThermoMode::cooling;
      if (indoor_c < control.heat_on_c) return ThermoMode::heating;
      return ThermoMode::sleep;
    case ThermoMode::cooling:
      return indoor_c <= control.cool_off_c ? ThermoMode::sleep
                                            : ThermoMode::cooling;
    case ThermoMode::heating:
      return indoor_c >= control.heat_off_c ? ThermoMode::sleep
                                            : ThermoMode::heating;
  }
  return ThermoMode::sleep;
}

// Circulation pumps run whenever the thermostat is not asleep.
inline bool pumps_on(ThermoMode mode) { return mode != ThermoMode::sleep; }

// ---- building node -------------------------------------------------------------------

// Single lumped air node.  The thermal capacitance is the air volume's;
// envelope mass is considered part of the exogenous load profile.
struct BuildingNode {
  double floor_area_m2 = 0.0;
  double floor_height_m = 3.0;
  double ua_w_per_k = 0.0;  // radiator (emitter) conductance to the room
  double indoor_temp_c = 21.0;

  double air_capacitance_j_per_k() const {
    return rho_air * cp_air * floor_area_m2 * floor_height_m;
  }

  void validate() const {
    require(floor_area_m2 > 0.0 && floor_height_m > 0.0,
            ErrorKind::invalid_argument,
            "building: floor area and height must be > 0");
    require(air_capacitance_j_per_k() > 0.0, ErrorKind::invalid_argument,
            "building: air capacitance must be > 0");
    require(ua_w_per_k > 0.0, ErrorKind::invalid_argument,
            "building: radiator UA must be > 0");
    require(std::isfinite(indoor_temp_c), ErrorKind::invalid_argument,
            "building: indoor temperature must be finite");
  }
};

// Heat the hydronic emitter can move into (+) or out of (-) the room given
// the supply water temperature, capped by the available machine capacity.
inline double radiator_delivery(const BuildingNode& node, ThermoMode mode,
                                const ControlConfig& control,
                                double capacity_cap_w) {
  require(capacity_cap_w >= 0.0, ErrorKind::invalid_argument,
          "radiator: capacity cap must be >= 0");
  if (mode == ThermoMode::heating) {
    double want = node.ua_w_per_k * (control.supply_heating_c - node.indoor_temp_c);
    return std::clamp(want, 0.0, capacity_cap_w);
  }
  if (mode == ThermoMode::cooling) {
    double want = node.ua_w_per_k * (node.indoor_temp_c - control.supply_cooling_c);
    return -std::clamp(want, 0.0, capacity_cap_w);
  }
  return 0.0;
}

// Explicit Euler update of the air node.  net_load_w is the exogenous demand
// with heating positive (heat leaving the building); hvac_delivery_w is the
// plant's signed delivery into the room.
inline double building_step(const BuildingNode& node, double net_load_w,
                            double hvac_delivery_w, double dt_s) {
  node.validate();
  require(dt_s > 0.0, ErrorKind::invalid_argument,
          "building step: dt must be > 0");
  require(std::isfinite(net_load_w) && std::isfinite(hvac_delivery_w),
          ErrorKind::invalid_argument,
          "building step: loads must be finite");
  return node.indoor_temp_c +
         dt_s * (hvac_delivery_w - net_load_w) / node.air_capacitance_j_per_k();
}

// ---- source configuration and dispatch -------------------------------------------------

enum class SourceKind { gshp_only, ashp_only, gshp_plus_ashp, gshp_plus_heater };

inline const char* to_string(SourceKind k) {
  switch (k) {
    case SourceKind::gshp_only: return "gshp-only";
    case SourceKind::ashp_only: return "ashp-only";
    case SourceKind::gshp_plus_ashp: return "gshp+ashp";
    case SourceKind::gshp_plus_heater: return "gshp+heater";
  }
  return "?";
}

struct SourceConfig {
  SourceKind kind = SourceKind::gshp_only;
  std::optional<BorefieldLayout> borefield;  // required for ground-coupled kinds

  // Hard operating envelope of the ground loop; leaving it in a plant with no
  // auxiliary source is a failure, not recoverable by control action.
  double failure_low_c = 2.0;
  double failure_high_c = 35.0;

  bool uses_ground() const { return kind != SourceKind::ashp_only; }
  bool has_ashp() const {
    return kind == SourceKind::ashp_only || kind == SourceKind::gshp_plus_ashp;
  }
  bool has_heater() const { return kind == SourceKind::gshp_plus_heater; }

  void validate() const {
    require(failure_low_c < failure_high_c, ErrorKind::invalid_argument,
            "source: failure envelope must have low < high");
    if (uses_ground()) {
      require(borefield.has_value(), ErrorKind::invalid_argument,
              "source: ground-coupled plants need a borefield layout");
      borefield->validate();
    }
  }
};

struct DispatchResult {
  bool gshp = false;
  bool ashp = false;
  bool heater = false;
  // The heater can only add heat; asking it to assist a cooling loop is a
  // capability gap the plant cannot serve.
  bool capability_gap = false;
};

// Which sources serve the current step.  Auxiliary sources join while the
// ground loop is outside [loop_low, loop_high]; the electric heater only in
// heating mode.
inline DispatchResult source_dispatch(const SourceConfig& source,
                                      double loop_temp_c, ThermoMode mode,
                                      const ControlConfig& control) {
  DispatchResult out;
  if (mode == ThermoMode::sleep) return out;
  const bool loop_outside =
      loop_temp_c < control.loop_low_c || loop_temp_c > control.loop_high_c;
  switch (source.kind) {
    case SourceKind::ashp_only:
      out.ashp = true;
      break;
    case SourceKind::gshp_only:
      out.gshp = true;
      break;
    case SourceKind::gshp_plus_ashp:
      out.gshp = true;
      out.ashp = loop_outside;
      break;
    case SourceKind::gshp_plus_heater:
      out.gshp = true;
      if (loop_outside) {
        if (mode == ThermoMode::heating)
          out.heater = true;
        else
          out.capability_gap = true;
      }
      break;
  }
  return out;
}

// A heat pump may run only when the plant is awake and its source loop
// carries at least the minimum flow fraction of the catalogue flow.
inline bool hp_enable(double source_flow_kg_s, const HeatPumpModel& model,
                      ThermoMode mode) {
  model.validate();
  require(source_flow_kg_s >= 0.0, ErrorKind::invalid_argument,
          "hp enable: flow must be >= 0");
  return mode != ThermoMode::sleep &&
         source_flow_kg_s >=
             model.min_flow_fraction * model.mdot_ref_source_kg_s;
}

// ---- simulation ------------------------------------------------------------------------

struct PlantConfig {
  BuildingNode building;
  ControlConfig control;
  SourceConfig source;

  // Machine pairs; only the pairs a source kind uses are validated/consulted.
  HeatPumpModel gshp_heating;
  HeatPumpModel gshp_cooling;
  HeatPumpModel ashp_heating;
  HeatPumpModel ashp_cooling;

  GroundProperties ground;  // ground-coupled kinds only
  PipeGeometry pipe;        // borehole internals (R_b, R_pp via multipole)

  // Optional precomputed field response.  Must have been built on exactly the
  // aggregation-cell boundaries this run will use (checked by fingerprint);
  // when absent the table is computed here.
  std::optional<GFunctionTable> gfunction;

  double dt_s = 300.0;        // must divide one hour
  int borehole_segments = 8;  // axial resolution of the internal model
  double pump_power_kw_per_kg_s = 0.03;  // circulation pump specific power

  void validate() const {
    building.validate();
    control.validate();
    source.validate();
    require(dt_s > 0.0, ErrorKind::invalid_argument,
            "plant: time step must be > 0");
    const double per_hour = seconds_per_hour / dt_s;
    require(std::abs(per_hour - std::round(per_hour)) < 1e-9 * per_hour &&
                per_hour >= 1.0,
            ErrorKind::invalid_argument,
            "plant: time step must divide one hour");
    // Explicit Euler on the air node: dt <= C/UA keeps the radiator-driven
    // update monotone (the contraction rate of the linear node is UA/C).
    const double tau_s = building.air_capacitance_j_per_k() / building.ua_w_per_k;
    require(dt_s <= tau_s, ErrorKind::invalid_argument,
            "plant: time step " + format_double(dt_s) +
                " s exceeds the building stability bound C_air/UA = " +
                format_double(tau_s) + " s");
    require(borehole_segments >= 1, ErrorKind::invalid_argument,
            "plant: need at least one borehole segment");
    require(pump_power_kw_per_kg_s >= 0.0, ErrorKind::invalid_argument,
            "plant: pump specific power must be >= 0");
    if (source.uses_ground()) {
      ground.validate();
      pipe.validate(ground.borehole_diameter_m);
      gshp_heating.validate();
      gshp_cooling.validate();
      require(gshp_heating.mode == HpMode::heating &&
                  gshp_cooling.mode == HpMode::cooling,
              ErrorKind::invalid_argument,
              "plant: ground-source models must be a heating/cooling pair");
    }
    if (source.has_ashp()) {
      ashp_heating.validate();
      ashp_cooling.validate();
      require(ashp_heating.mode == HpMode::heating &&
                  ashp_cooling.mode == HpMode::cooling,
              ErrorKind::invalid_argument,
              "plant: air-source models must be a heating/cooling pair");
    }
  }
};

enum class SimStatus { completed, failed };

inline const char* to_string(SimStatus s) {
  return s == SimStatus::completed ? "completed" : "failed";
}

struct SimulationResult {
  SimStatus status = SimStatus::completed;
  std::string failure_reason;        // empty when completed
  double failure_time_hours = -1.0;  // valid when failed

  double dt_s = 0.0;
  std::size_t steps = 0;  // substeps actually simulated

  double total_electricity_kwh = 0.0;
  double gshp_electricity_kwh = 0.0;
  double ashp_electricity_kwh = 0.0;
  double heater_electricity_kwh = 0.0;
  double pump_electricity_kwh = 0.0;

  // Hourly series over completed hours.  Temperatures are instantaneous at
  // the hour boundary; powers are hour means.  Loop series are empty for
  // air-only plants.
  std::vector<double> indoor_c;
  std::vector<double> loop_supply_c;
  std::vector<double> loop_return_c;
  std::vector<double> gshp_kw;
  std::vector<double> ashp_kw;
  std::vector<double> heater_kw;
  std::vector<double> pump_kw;
  std::vector<double> active_seconds;           // pump-on time per hour
  std::vector<double> loop_dt_kelvin_seconds;   // integral of |supply-return| over pump-on time

  // Substep-resolution indoor trace (for band accounting in analyses).
  std::vector<double> indoor_substep_c;
};

namespace detail {

// Linear interpolation of an hourly series at t seconds; the last sample
// extends flat through its own hour.
inline double lerp_hourly(const std::vector<double>& v, double t_s) {
  const double x = t_s / seconds_per_hour;
  const auto i = static_cast<std::size_t>(x);
  if (i + 1 >= v.size()) return v.back();
  const double w = x - static_cast<double>(i);
  return v[i] + w * (v[i + 1] - v[i]);
}

}  // namespace detail

// The fingerprint a supplied g-function table must carry to be accepted by
// simulate() for this plant and horizon — the key for an external table
// cache.  A matching table is produced by borefield_gfunction() on the same
// layout, ground and aggregation boundaries.
inline std::string simulation_gfunction_fingerprint(const PlantConfig& cfg,
                                                    std::size_t n_hours) {
  require(cfg.source.uses_ground() && cfg.source.borefield.has_value(),
          ErrorKind::invalid_argument,
          "gfunction fingerprint: plant has no borefield");
  require(n_hours > 0, ErrorKind::invalid_argument,
          "gfunction fingerprint: horizon must be positive");
  const AggregationState agg = AggregationState::make(
      cfg.dt_s, static_cast<double>(n_hours) * seconds_per_hour);
  return hex_digest(layout_fingerprint(*cfg.source.borefield, cfg.ground,
                                       agg.boundaries_s()));
}

// The aggregation-cell boundaries simulate() will use, exposed so a cache
// can compute the table on exactly the grid the run expects.
inline std::vector<double> simulation_time_grid(const PlantConfig& cfg,
                                                std::size_t n_hours) {
  require(n_hours > 0, ErrorKind::invalid_argument,
          "time grid: horizon must be positive");
  return AggregationState::make(cfg.dt_s, static_cast<double>(n_hours) *
                                              seconds_per_hour)
      .boundaries_s();
}

// Fixed-step plant simulation over aligned hourly heating/cooling/weather
// series.  Per step: interpolate loads, advance the thermostat, dispatch
// sources, evaluate the machine maps at the current temperatures, advance the
// ground loop, advance the building, meter electricity.
//
// Dispatch priority: auxiliary sources (air unit, heater) serve first while
// dispatched — they exist to unload the ground loop so it can recover and
// the assist can disengage.  The ground machine covers the remainder.
//
// Runtime trouble (loop leaving the failure envelope in a ground-only plant,
// the heater being asked to cool) ends the run with status=failed; only
// configuration errors throw.
inline SimulationResult simulate(const PlantConfig& cfg,
                                 const LoadProfile& heating,
                                 const LoadProfile& cooling,
                                 const std::vector<double>& outdoor_c) {
  cfg.validate();
  heating.validate("plant heating profile");
  cooling.validate("plant cooling profile");
  require(heating.mode == LoadMode::heating && cooling.mode == LoadMode::cooling,
          ErrorKind::invalid_argument,
          "plant: profiles must be a heating/cooling pair");
  const std::size_t n_hours = heating.values_kw.size();
  require(cooling.values_kw.size() == n_hours &&
              outdoor_c.size() == n_hours,
          ErrorKind::invalid_argument,
          "plant: heating, cooling and weather series must have equal length");
  for (double t : outdoor_c)
    require(std::isfinite(t) && t > -60.0 && t < 60.0,
            ErrorKind::invalid_argument,
            "plant: outdoor temperatures must be finite and plausible");

  const bool uses_ground = cfg.source.uses_ground();
  const auto steps_per_hour =
      static_cast<std::size_t>(std::llround(seconds_per_hour / cfg.dt_s));
  const double dt = cfg.dt_s;
  const std::size_t total_steps = n_hours * steps_per_hour;

  // --- ground side setup ---
  AggregationState agg = AggregationState::make(1.0, 2.0);  // placeholder
  GFunctionTable gtable;
  BoreholeInternalModel internal = BoreholeInternalModel::make(1.0, 1, 1.0, 0.0, 0.01, 0.0);
  double bore_count = 0.0;
  if (uses_ground) {
    const BorefieldLayout& layout = *cfg.source.borefield;
    agg = AggregationState::make(dt, static_cast<double>(n_hours) * seconds_per_hour);
    if (cfg.gfunction.has_value()) {
      const std::string want = hex_digest(
          layout_fingerprint(layout, cfg.ground, agg.boundaries_s()));
      require(cfg.gfunction->fingerprint == want, ErrorKind::stale,
              "plant: supplied g-function table was built for a different "
              "layout, ground or time grid");
      gtable = *cfg.gfunction;
    } else {
      gtable = borefield_gfunction(layout, agg.boundaries_s(), cfg.ground);
    }
    const double r_b = borehole_resistance(cfg.ground, cfg.pipe);
    const double r_pp = multipole_resistances(cfg.ground, cfg.pipe).r_pp_mk_w;
    internal = BoreholeInternalModel::make(layout.depth_m, cfg.borehole_segments,
                                           r_b, r_pp, cfg.pipe.inner_diameter_m,
                                           cfg.ground.temperature_c);
    bore_count = static_cast<double>(layout.count());
    // Validate table/aggregation consistency once; the stepping loop then
    // uses the prevalidated convolution.
    (void)wall_temperature(gtable, agg, cfg.ground);
  }

  SimulationResult out;
  out.dt_s = dt;
  out.indoor_substep_c.reserve(total_steps);
  out.indoor_c.reserve(n_hours);

  BuildingNode node = cfg.building;
  ThermoMode mode = ThermoMode::sleep;
  double loop_supply = uses_ground ? cfg.ground.temperature_c : 0.0;
  double loop_return = loop_supply;

  // hour accumulators
  double h_gshp_j = 0.0, h_ashp_j = 0.0, h_heater_j = 0.0, h_pump_j = 0.0;
  double h_active_s = 0.0, h_dt_ks = 0.0;

  const double cap_inf = std::numeric_limits<double>::infinity();

  for (std::size_t s = 0; s < total_steps; ++s) {
    const double t_s = static_cast<double>(s) * dt;
    const double load_h_w = 1000.0 * detail::lerp_hourly(heating.values_kw, t_s);
    const double load_c_w = 1000.0 * detail::lerp_hourly(cooling.values_kw, t_s);
    const double net_load_w = load_h_w - load_c_w;  // heating positive
    const double t_out_c = detail::lerp_hourly(outdoor_c, t_s);

    mode = thermostat_step(mode, node.indoor_temp_c, cfg.control);
    const bool pumping = pumps_on(mode);
    const bool heating_mode = mode == ThermoMode::heating;

    const DispatchResult disp =
        source_dispatch(cfg.source, loop_supply, mode, cfg.control);
    if (disp.capability_gap) {
      out.status = SimStatus::failed;
      out.failure_time_hours = t_s / seconds_per_hour;
      out.failure_reason =
          "electric heater cannot assist a cooling loop at " +
          format_double(loop_supply) + " degC (hour " +
          format_double(out.failure_time_hours) + ")";
      break;
    }

    // --- machine evaluation at current temperatures and flows ---
    double p_gshp_w = 0.0, p_ashp_w = 0.0, p_heater_w = 0.0;
    double delivered_w = 0.0;     // magnitude into (+heating) / out of (-cooling) the room
    double gshp_source_w = 0.0;   // magnitude exchanged with the ground loop
    double m_src = 0.0;           // ground loop flow while pumping
    double m_load = 0.0;          // radiator loop flow while pumping

    if (mode != ThermoMode::sleep) {
      const HeatPumpModel& gshp = heating_mode ? cfg.gshp_heating : cfg.gshp_cooling;
      const HeatPumpModel& ashp = heating_mode ? cfg.ashp_heating : cfg.ashp_cooling;
      const double t_load_c = heating_mode ? cfg.control.supply_heating_c
                                           : cfg.control.supply_cooling_c;
      const double t_load_k = t_load_c + celsius_to_kelvin;
      double remaining_w = std::abs(radiator_delivery(node, mode, cfg.control, cap_inf));

      if (uses_ground) m_src = gshp.mdot_ref_source_kg_s;
      m_load = uses_ground ? gshp.mdot_ref_load_kg_s : ashp.mdot_ref_load_kg_s;

      if (disp.ashp && hp_enable(ashp.mdot_ref_source_kg_s, ashp, mode)) {
        const double t_src_k = t_out_c + celsius_to_kelvin;
        const double q = hp_capacity(ashp, t_load_k, t_src_k,
                                     ashp.mdot_ref_load_kg_s,
                                     ashp.mdot_ref_source_kg_s);
        if (q > 0.0) {
          const double take = std::min(remaining_w, q);
          const double duty = take / q;
          p_ashp_w = duty * hp_power(ashp, t_load_k, t_src_k,
                                     ashp.mdot_ref_load_kg_s,
                                     ashp.mdot_ref_source_kg_s);
          remaining_w -= take;
          delivered_w += take;
        }
      }
      if (disp.heater) {  // resistance bank: covers whatever is left, COP 1
        p_heater_w = remaining_w;
        delivered_w += remaining_w;
        remaining_w = 0.0;
      }
      if (disp.gshp && hp_enable(pumping ? m_src : 0.0, gshp, mode)) {
        const double t_src_k = loop_supply + celsius_to_kelvin;
        const double q = hp_capacity(gshp, t_load_k, t_src_k,
                                     gshp.mdot_ref_load_kg_s, m_src);
        if (q > 0.0) {
          const double take = std::min(remaining_w, q);
          const double duty = take / q;
          const double p = hp_power(gshp, t_load_k, t_src_k,
                                    gshp.mdot_ref_load_kg_s, m_src);
          p_gshp_w = duty * p;
          // Source side carries the capacity net of (heating) or plus
          // (cooling) the compressor work.
          gshp_source_w = duty * (heating_mode ? std::max(q - p, 0.0) : q + p);
          remaining_w -= take;
          delivered_w += take;
        }
      }
    }

    const double hvac_w = heating_mode ? delivered_w : -delivered_w;

    // --- ground loop advance ---
    if (uses_ground) {
      const double mcp = m_src * cp_water;
      if (pumping && mcp > 0.0) {
        loop_return = heating_mode ? loop_supply - gshp_source_w / mcp
                                   : loop_supply + gshp_source_w / mcp;
      } else {
        loop_return = loop_supply;
      }
      const double t_b = wall_temperature_prevalidated(gtable, agg, cfg.ground);
      const double per_bore = pumping ? m_src / bore_count : 0.0;
      const auto res = internal.step(std::span<const double>(&t_b, 1),
                                     loop_return, per_bore, dt);
      agg.push(res.flux_into_ground_w_per_m);
      if (pumping) {
        h_dt_ks += std::abs(loop_supply - loop_return) * dt;
        loop_supply = res.outlet_c;
      } else {
        loop_supply = res.outlet_c;  // stagnant fluid relaxing toward the wall
      }
      if (cfg.source.kind == SourceKind::gshp_only && pumping &&
          (loop_supply < cfg.source.failure_low_c ||
           loop_supply > cfg.source.failure_high_c)) {
        out.status = SimStatus::failed;
        out.failure_time_hours = (t_s + dt) / seconds_per_hour;
        out.failure_reason =
            "ground-loop temperature " + format_double(loop_supply) +
            " degC left the failure envelope [" +
            format_double(cfg.source.failure_low_c) + ", " +
            format_double(cfg.source.failure_high_c) + "] degC (hour " +
            format_double(out.failure_time_hours) + ")";
        break;
      }
    }

    // --- building advance ---
    node.indoor_temp_c = building_step(node, net_load_w, hvac_w, dt);
    out.indoor_substep_c.push_back(node.indoor_temp_c);
    ++out.steps;

    // --- metering ---
    const double p_pump_w =
        pumping ? cfg.pump_power_kw_per_kg_s * 1000.0 * (m_load + m_src) : 0.0;
    h_gshp_j += p_gshp_w * dt;
    h_ashp_j += p_ashp_w * dt;
    h_heater_j += p_heater_w * dt;
    h_pump_j += p_pump_w * dt;
    if (pumping) h_active_s += dt;

    // --- hourly records ---
    if ((s + 1) % steps_per_hour == 0) {
      const double to_kwh = 1.0 / 3.6e6;
      out.indoor_c.push_back(node.indoor_temp_c);
      if (uses_ground) {
        out.loop_supply_c.push_back(loop_supply);
        out.loop_return_c.push_back(loop_return);
      }
      out.gshp_kw.push_back(h_gshp_j / seconds_per_hour / 1000.0);
      out.ashp_kw.push_back(h_ashp_j / seconds_per_hour / 1000.0);
      out.heater_kw.push_back(h_heater_j / seconds_per_hour / 1000.0);
      out.pump_kw.push_back(h_pump_j / seconds_per_hour / 1000.0);
      out.active_seconds.push_back(h_active_s);
      out.loop_dt_kelvin_seconds.push_back(h_dt_ks);
      out.gshp_electricity_kwh += h_gshp_j * to_kwh;
      out.ashp_electricity_kwh += h_ashp_j * to_kwh;
      out.heater_electricity_kwh += h_heater_j * to_kwh;
      out.pump_electricity_kwh += h_pump_j * to_kwh;
      h_gshp_j = h_ashp_j = h_heater_j = h_pump_j = 0.0;
      h_active_s = h_dt_ks = 0.0;
    }
  }

  // Fold any partial hour cut off by a failure into the totals (no hourly row).
  const double to_kwh = 1.0 / 3.6e6;
  out.gshp_electricity_kwh += h_gshp_j * to_kwh;
  out.ashp_electricity_kwh += h_ashp_j * to_kwh;
  out.heater_electricity_kwh += h_heater_j * to_kwh;
  out.pump_electricity_kwh += h_pump_j * to_kwh;
  out.total_electricity_kwh = out.gshp_electricity_kwh +
                              out.ashp_electricity_kwh +
                              out.heater_electricity_kwh +
                              out.pump_electricity_kwh;
  return out;
}

}  // namespace ghp
