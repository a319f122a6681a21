// Load benchmarking and profile scaling.
//
// A thermal node is described by hourly heating/cooling profiles (kW, length
// 8760).  Metered building records give annual/peak targets; an unscaled
// shape is fitted to those targets with an affine map (gain k, offset b)
// minimising the relative least-squares objective
//
//   f(k, b) = ((sum(k L + b) - E)/E)^2 + ((max(k L + b) - P)/P)^2 .
#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ghp/common.hpp"
#include "ghp/numerics.hpp"

namespace ghp {

enum class LoadMode { heating, cooling };
enum class Provenance { metered, synthetic, scaled };

inline const char* to_string(LoadMode m) {
  return m == LoadMode::heating ? "heating" : "cooling";
}
inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::metered: return "metered";
    case Provenance::synthetic: return "synthetic";
    default: return "scaled";
  }
}

struct LoadProfile {
  std::vector<double> values_kw;  // hourly, length 8760
  LoadMode mode = LoadMode::heating;
  Provenance provenance = Provenance::synthetic;

  void validate(const std::string& label = "profile") const {
    require(values_kw.size() == static_cast<std::size_t>(hours_per_year),
            ErrorKind::invalid_argument,
            label + ": expected 8760 hourly values, got " +
                std::to_string(values_kw.size()));
    for (std::size_t i = 0; i < values_kw.size(); ++i) {
      // Hot loop: build the message only on failure.
      if (!(std::isfinite(values_kw[i]) && values_kw[i] >= 0.0)) {
        fail(ErrorKind::invalid_argument,
             label + ": value at hour " + std::to_string(i) +
                 " must be finite and >= 0, got " +
                 format_double(values_kw[i]));
      }
    }
  }

  double annual_kwh() const { return sum(values_kw); }
  double peak_kw() const { return max_value(values_kw); }
};

// ---- building records and benchmark targets ---------------------------------

enum class BuildingType { office, laboratory, residential, classroom, mixed };

inline BuildingType parse_building_type(const std::string& s) {
  if (s == "office") return BuildingType::office;
  if (s == "laboratory" || s == "lab") return BuildingType::laboratory;
  if (s == "residential") return BuildingType::residential;
  if (s == "classroom") return BuildingType::classroom;
  if (s == "mixed") return BuildingType::mixed;
  fail(ErrorKind::invalid_argument, "unknown building type: " + s);
}

inline const char* to_string(BuildingType t) {
  switch (t) {
    case BuildingType::office: return "office";
    case BuildingType::laboratory: return "laboratory";
    case BuildingType::residential: return "residential";
    case BuildingType::classroom: return "classroom";
    default: return "mixed";
  }
}

struct BuildingRecord {
  std::string name;
  BuildingType type = BuildingType::mixed;
  double floor_area_m2 = 0.0;
  std::optional<double> annual_steam_kbtu;        // metered steam use
  std::optional<double> annual_electricity_kwh;   // whole-building electricity
  std::optional<double> cooling_electricity_kwh;  // chiller submeter, if any
  std::optional<double> peak_heating_kbtu_h;
  std::optional<double> peak_cooling_tons;
};

struct BenchmarkParams {
  double steam_loss_fraction = 0.15;        // distribution losses
  double heating_system_efficiency = 0.95;  // building-side conversion
  // Seasonal thermal COP of the existing chiller plant, used to turn cooling
  // electricity back into delivered cooling: 3.51685 kW/ton / 1.25 kWe/ton.
  double seasonal_chiller_cop = kw_per_ton / 1.25;
  double default_cooling_attribution = 1.0;  // share of electricity -> cooling
  std::map<BuildingType, double> cooling_attribution_by_type;
  double peak_diversity = 1.0;  // coincidence factor applied to summed peaks

  void validate() const {
    require(steam_loss_fraction >= 0.0 && steam_loss_fraction < 1.0,
            ErrorKind::invalid_argument,
            "steam_loss_fraction must be in [0, 1)");
    require(heating_system_efficiency > 0.0 &&
                heating_system_efficiency <= 1.0,
            ErrorKind::invalid_argument,
            "heating_system_efficiency must be in (0, 1]");
    require(seasonal_chiller_cop > 0.0, ErrorKind::invalid_argument,
            "seasonal_chiller_cop must be > 0");
    auto check_fraction = [](double f, const std::string& what) {
      require(f > 0.0 && f <= 1.0, ErrorKind::invalid_argument,
              what + " must be in (0, 1]");
    };
    check_fraction(default_cooling_attribution, "default_cooling_attribution");
    for (const auto& [type, f] : cooling_attribution_by_type)
      check_fraction(f, std::string("cooling attribution for ") +
                            to_string(type));
    require(peak_diversity > 0.0 && peak_diversity <= 1.5,
            ErrorKind::invalid_argument, "peak_diversity must be in (0, 1.5]");
  }

  double attribution_for(BuildingType t) const {
    auto it = cooling_attribution_by_type.find(t);
    return it == cooling_attribution_by_type.end()
               ? default_cooling_attribution
               : it->second;
  }
};

struct BenchmarkTargets {
  double annual_energy_kwh = 0.0;  // thermal
  double peak_kw = 0.0;            // thermal
};

struct NodeBenchmarks {
  BenchmarkTargets heating;
  BenchmarkTargets cooling;
  std::vector<std::string> notes;  // per-building fallbacks and caveats
};

// Aggregate metered building records into node-level heating/cooling targets.
//
// Heating energy comes from metered steam net of distribution losses and
// conversion efficiency; cooling energy from (sub)metered electricity times
// the attribution share and the seasonal chiller COP.  Peaks are summed and
// de-rated by the coincidence factor.  Every quantity must be derivable from
// at least one record, otherwise the missing fields are reported.
inline NodeBenchmarks derive_benchmarks(
    const std::vector<BuildingRecord>& records, const BenchmarkParams& params) {
  params.validate();
  require(!records.empty(), ErrorKind::invalid_argument,
          "derive_benchmarks: no building records supplied");

  NodeBenchmarks out;
  int n_heat_energy = 0, n_heat_peak = 0, n_cool_energy = 0, n_cool_peak = 0;

  for (const auto& rec : records) {
    require(rec.floor_area_m2 > 0.0, ErrorKind::invalid_argument,
            "building '" + rec.name + "': floor_area_m2 must be > 0");
    if (rec.annual_steam_kbtu) {
      require(*rec.annual_steam_kbtu >= 0.0, ErrorKind::invalid_argument,
              "building '" + rec.name + "': annual_steam_kbtu must be >= 0");
      out.heating.annual_energy_kwh +=
          *rec.annual_steam_kbtu * (1.0 - params.steam_loss_fraction) *
          params.heating_system_efficiency * kw_per_kbtu_h;
      ++n_heat_energy;
    }
    if (rec.peak_heating_kbtu_h) {
      out.heating.peak_kw += *rec.peak_heating_kbtu_h * kw_per_kbtu_h;
      ++n_heat_peak;
    }
    if (rec.peak_cooling_tons) {
      out.cooling.peak_kw += *rec.peak_cooling_tons * kw_per_ton;
      ++n_cool_peak;
    }
    const std::optional<double>& elec = rec.cooling_electricity_kwh
                                            ? rec.cooling_electricity_kwh
                                            : rec.annual_electricity_kwh;
    if (elec) {
      require(*elec >= 0.0, ErrorKind::invalid_argument,
              "building '" + rec.name + "': electricity must be >= 0");
      out.cooling.annual_energy_kwh +=
          *elec * params.attribution_for(rec.type) *
          params.seasonal_chiller_cop;
      ++n_cool_energy;
      if (!rec.cooling_electricity_kwh)
        out.notes.push_back("building '" + rec.name +
                            "': whole-building electricity used for cooling "
                            "attribution (no chiller submeter)");
    }
  }

  std::string missing;
  auto note_missing = [&](int n, const char* field) {
    if (n == 0) {
      if (!missing.empty()) missing += ", ";
      missing += field;
    }
  };
  note_missing(n_heat_energy, "annual_steam_kbtu");
  note_missing(n_heat_peak, "peak_heating_kbtu_h");
  note_missing(n_cool_energy,
               "annual_electricity_kwh or cooling_electricity_kwh");
  note_missing(n_cool_peak, "peak_cooling_tons");
  require(missing.empty(), ErrorKind::insufficient_data,
          "insufficient metered data: no record provides " + missing);

  out.heating.peak_kw *= params.peak_diversity;
  out.cooling.peak_kw *= params.peak_diversity;
  return out;
}

// ---- affine profile scaling ---------------------------------------------------

struct ScalingSolution {
  double gain = 1.0;        // k
  double offset = 0.0;      // b, kW
  double residual = 0.0;    // objective value after clamping
  int clamped_hours = 0;    // hours where k L + b < 0 was clamped to 0
};

inline void validate_targets(const BenchmarkTargets& t,
                             const std::string& label) {
  require(std::isfinite(t.annual_energy_kwh) && std::isfinite(t.peak_kw),
          ErrorKind::invalid_argument, label + ": targets must be finite");
  require(t.annual_energy_kwh > 0.0 && t.peak_kw > 0.0, ErrorKind::degenerate,
          label + ": degenerate targets (annual energy and peak must be > 0)");
  require(t.annual_energy_kwh <= hours_per_year * t.peak_kw,
          ErrorKind::infeasible,
          label + ": annual energy " + format_double(t.annual_energy_kwh) +
              " kWh exceeds 8760 h x peak " + format_double(t.peak_kw) +
              " kW; no profile can satisfy both");
}

// Relative least-squares objective for a candidate affine map.  Exactly the
// quantity minimised by scale_profile, exposed for diagnostics and tests.
inline double eq1_objective(double k, double b, const LoadProfile& profile,
                            const BenchmarkTargets& targets) {
  profile.validate();
  validate_targets(targets, "eq1_objective");
  double s = 0.0;
  double m = -std::numeric_limits<double>::infinity();
  for (double v : profile.values_kw) {
    double x = k * v + b;
    s += x;
    if (x > m) m = x;
  }
  double de = (s - targets.annual_energy_kwh) / targets.annual_energy_kwh;
  double dp = (m - targets.peak_kw) / targets.peak_kw;
  return de * de + dp * dp;
}

struct ScaledProfile {
  LoadProfile profile;
  ScalingSolution solution;
};

// Fit (k, b) so that the scaled profile meets the annual-energy and peak
// targets, clamp any negative tail to zero, and report the achieved residual.
inline ScaledProfile scale_profile(const LoadProfile& unscaled,
                                   const BenchmarkTargets& targets) {
  unscaled.validate("unscaled profile");
  validate_targets(targets, "scale_profile");

  const double total = sum(unscaled.values_kw);
  const double peak = max_value(unscaled.values_kw);
  require(total > 0.0, ErrorKind::degenerate,
          "scale_profile: profile is identically zero and cannot be scaled");

  const double e = targets.annual_energy_kwh;
  const double p = targets.peak_kw;

  double k, b;
  double min_v = unscaled.values_kw[0];
  for (double v : unscaled.values_kw) min_v = std::min(min_v, v);

  if (peak == min_v) {
    // Constant shape: k and b are interchangeable, so the offset is pinned to
    // zero and the scaled level u = k * c has the closed-form optimum of
    //   ((8760 u - E)/E)^2 + ((u - P)/P)^2 .
    const double n = static_cast<double>(hours_per_year);
    double u = (n / e + 1.0 / p) / (n * n / (e * e) + 1.0 / (p * p));
    k = u / peak;
    b = 0.0;
  } else {
    auto objective = [&](const std::vector<double>& x) {
      double kk = std::exp(x[0]);
      double bb = x[1];
      double s = kk * total + hours_per_year * bb;
      double m = kk * peak + bb;
      double de = (s - e) / e;
      double dp = (m - p) / p;
      return de * de + dp * dp;
    };
    NelderMeadResult best =
        nelder_mead(objective, {std::log(e / total), 0.0}, 0.5, 600, 1e-16);
    if (!best.converged || best.value > 1e-9) {
      NelderMeadResult retry =
          nelder_mead(objective, {std::log(p / peak), 0.0}, 0.5, 600, 1e-16);
      if (retry.value < best.value) best = retry;
    }
    require(best.value < 1e-6, ErrorKind::numeric,
            "scale_profile: optimiser did not reach the targets (best "
            "objective " +
                format_double(best.value) + " at k = " +
                format_double(std::exp(best.x[0])) + ", b = " +
                format_double(best.x[1]) + ")");
    k = std::exp(best.x[0]);
    b = best.x[1];
  }

  ScaledProfile out;
  out.profile.mode = unscaled.mode;
  out.profile.provenance = Provenance::scaled;
  out.profile.values_kw.resize(unscaled.values_kw.size());
  int clamped = 0;
  for (std::size_t i = 0; i < unscaled.values_kw.size(); ++i) {
    double v = k * unscaled.values_kw[i] + b;
    if (v < 0.0) {
      v = 0.0;
      ++clamped;
    }
    out.profile.values_kw[i] = v;
  }
  out.solution.gain = k;
  out.solution.offset = b;
  out.solution.clamped_hours = clamped;
  // Residual is re-evaluated on the delivered (clamped) values.
  out.solution.residual = eq1_objective(1.0, 0.0, out.profile, targets);
  return out;
}

// Element-wise sum of two heating profiles (e.g. space heat plus domestic hot
// water).  Provenance degrades to synthetic when the inputs disagree.
inline LoadProfile combine_heating(const LoadProfile& a, const LoadProfile& b) {
  require(a.mode == LoadMode::heating && b.mode == LoadMode::heating,
          ErrorKind::invalid_argument,
          "combine_heating: both profiles must be heating profiles");
  require(a.values_kw.size() == b.values_kw.size(),
          ErrorKind::invalid_argument,
          "combine_heating: length mismatch (" +
              std::to_string(a.values_kw.size()) + " vs " +
              std::to_string(b.values_kw.size()) + ")");
  a.validate("combine_heating lhs");
  b.validate("combine_heating rhs");
  LoadProfile out;
  out.mode = LoadMode::heating;
  out.provenance =
      a.provenance == b.provenance ? a.provenance : Provenance::synthetic;
  out.values_kw.resize(a.values_kw.size());
  for (std::size_t i = 0; i < a.values_kw.size(); ++i)
    out.values_kw[i] = a.values_kw[i] + b.values_kw[i];
  return out;
}

// Loop flow that gives a 5 K design temperature difference at the average of
// the loads the circuit actually sees.  kg/s.
inline double nominal_flow(const LoadProfile& profile,
                           double design_delta_t_k = 5.0) {
  profile.validate("nominal_flow profile");
  require(design_delta_t_k > 0.0, ErrorKind::invalid_argument,
          "nominal_flow: design delta-T must be > 0");
  double m = mean(profile.values_kw);
  require(m > 0.0, ErrorKind::degenerate,
          "nominal_flow: profile mean is zero; flow is undefined");
  return m * 1000.0 / (cp_water * design_delta_t_k);
}

}  // namespace ghp
