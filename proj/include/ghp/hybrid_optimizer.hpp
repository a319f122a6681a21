#pragma once

// Cost-optimal split of a district load between ground-source and air-source
// plant.  A shave factor alpha in [0, 1] fixes a capacity threshold c: the
// ground-source machines carry min(load, c) in both modes (the base of the
// duration curve), air-source machines carry the rest.  For each alpha on a
// 0.01 grid the borefield is sized for the shaved loads and a 20-year net
// present cost is assembled; the sweep minimum is the recommended design.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ghp/borefield_sizing.hpp"
#include "ghp/common.hpp"
#include "ghp/ground_response.hpp"
#include "ghp/load_model.hpp"
#include "ghp/numerics.hpp"

namespace ghp {

// ---- cost and efficiency parameters --------------------------------------------

struct CostParams {
  double ghx_unit_cost_per_m = 65.5;        // drilled + installed
  double heat_pump_unit_cost_per_kw = 80.0;  // thermal capacity, either kind
  double electricity_price_per_kwh = 0.08;
  double interest_rate = 0.08;   // per year
  double inflation_rate = 0.04;  // per year, operating cost only
  int horizon_years = 20;

  void validate() const {
    require(ghx_unit_cost_per_m > 0.0 && heat_pump_unit_cost_per_kw > 0.0 &&
                electricity_price_per_kwh > 0.0,
            ErrorKind::invalid_argument, "cost params: unit costs must be > 0");
    require(interest_rate >= 0.0 && interest_rate < 1.0,
            ErrorKind::invalid_argument,
            "cost params: interest rate must lie in [0, 1)");
    require(inflation_rate >= 0.0 && inflation_rate < 1.0,
            ErrorKind::invalid_argument,
            "cost params: inflation rate must lie in [0, 1)");
    require(horizon_years >= 1, ErrorKind::invalid_argument,
            "cost params: horizon must be at least one year");
  }
};

struct CopSet {
  double ashp_heating = 2.5;
  double ashp_cooling = 4.5;
  double gshp_heating = 3.5;
  double gshp_cooling = 5.5;

  void validate() const {
    require(ashp_heating > 1.0 && ashp_cooling > 1.0 && gshp_heating > 1.0 &&
                gshp_cooling > 1.0,
            ErrorKind::invalid_argument, "cop set: every COP must exceed one");
  }

  // A ground loop beaten by outdoor air is suspicious but not impossible;
  // report it instead of rejecting.
  std::vector<std::string> warnings() const {
    std::vector<std::string> w;
    if (gshp_heating < ashp_heating)
      w.push_back("cop set: ground-source heating COP " +
                  format_double(gshp_heating) + " is below air-source " +
                  format_double(ashp_heating));
    if (gshp_cooling < ashp_cooling)
      w.push_back("cop set: ground-source cooling COP " +
                  format_double(gshp_cooling) + " is below air-source " +
                  format_double(ashp_cooling));
    return w;
  }
};

struct ShaveFactors {
  double alpha = 0.0;                  // covered fraction of cooling energy
  double beta = 0.0;                   // resulting fraction of heating energy
  double capacity_threshold_kw = 0.0;  // the shared machine capacity c

  void validate() const {
    require(alpha >= 0.0 && alpha <= 1.0 && beta >= 0.0 && beta <= 1.0,
            ErrorKind::invalid_argument,
            "shave factors: alpha and beta must lie in [0, 1]");
    require(capacity_threshold_kw >= 0.0, ErrorKind::invalid_argument,
            "shave factors: capacity threshold must be >= 0");
  }
};

// ---- shave-factor machinery -----------------------------------------------------

// Smallest capacity c with sum(min(L, c)) >= alpha * sum(L), bisected on
// [0, max L] to an absolute tolerance of 1e-6 * max L.  The corners are
// exact: alpha 0 -> 0, alpha 1 -> peak.
inline double threshold_for_alpha(const LoadProfile& profile, double alpha) {
  profile.validate("threshold profile");
  require(alpha >= 0.0 && alpha <= 1.0, ErrorKind::invalid_argument,
          "threshold: alpha must lie in [0, 1], got " + format_double(alpha));
  if (alpha == 0.0) return 0.0;
  const double total = sum(profile.values_kw);
  require(total > 0.0, ErrorKind::degenerate,
          "threshold: an all-zero profile cannot cover a positive fraction");
  const double peak = max_value(profile.values_kw);
  auto shaved = [&](double c) {
    double s = 0.0;
    for (double v : profile.values_kw) s += std::min(v, c);
    return s;
  };
  return bisect_increasing(shaved, 0.0, peak, alpha * total, 1e-6 * peak);
}

// Fraction of heating energy under the same capacity threshold.
inline double beta_from_alpha(const LoadProfile& heating, double c_kw) {
  heating.validate("heating profile");
  require(c_kw >= 0.0, ErrorKind::invalid_argument,
          "beta: capacity threshold must be >= 0");
  const double total = sum(heating.values_kw);
  if (total <= 0.0) return 0.0;
  double under = 0.0;
  for (double v : heating.values_kw) under += std::min(v, c_kw);
  return under / total;
}

// ---- annual energy accounting ----------------------------------------------------

struct ElectricitySplit {
  double gshp_kwh = 0.0;
  double ashp_kwh = 0.0;
  // Thermal energy carried by each side, for conservation checks.
  double gshp_thermal_kwh = 0.0;
  double ashp_thermal_kwh = 0.0;
};

// Electricity drawn per side over a year of hourly loads: the ground-source
// side serves min(L, c) in each mode, the air-source side the remainder.
// The thermal remainder is formed as (total - shaved) so the two sides add
// up to the profile energy exactly.
inline ElectricitySplit annual_electricity_split(const LoadProfile& heating,
                                                 const LoadProfile& cooling,
                                                 double c_kw,
                                                 const CopSet& cops) {
  heating.validate("heating profile");
  cooling.validate("cooling profile");
  cops.validate();
  require(c_kw >= 0.0, ErrorKind::invalid_argument,
          "electricity split: capacity threshold must be >= 0");
  auto shaved_sum = [&](const LoadProfile& p) {
    double s = 0.0;
    for (double v : p.values_kw) s += std::min(v, c_kw);
    return s;
  };
  const double heat_total = sum(heating.values_kw);
  const double cool_total = sum(cooling.values_kw);
  const double heat_base = shaved_sum(heating);
  const double cool_base = shaved_sum(cooling);

  ElectricitySplit out;
  out.gshp_thermal_kwh = heat_base + cool_base;
  out.ashp_thermal_kwh = (heat_total - heat_base) + (cool_total - cool_base);
  out.gshp_kwh = cool_base / cops.gshp_cooling + heat_base / cops.gshp_heating;
  out.ashp_kwh = (cool_total - cool_base) / cops.ashp_cooling +
                 (heat_total - heat_base) / cops.ashp_heating;
  return out;
}

// ---- costs ------------------------------------------------------------------------

inline double capital_cost(const SizingResult& sizing, double gshp_capacity_kw,
                           double ashp_capacity_kw, const CostParams& costs) {
  costs.validate();
  require(gshp_capacity_kw >= 0.0 && ashp_capacity_kw >= 0.0,
          ErrorKind::invalid_argument,
          "capital cost: capacities must be >= 0");
  const double drilled_m = sizing.borehole_count * sizing.borehole_depth_m;
  return costs.ghx_unit_cost_per_m * drilled_m +
         costs.heat_pump_unit_cost_per_kw *
             (gshp_capacity_kw + ashp_capacity_kw);
}

inline double npv(const std::vector<double>& cash_flows, double rate) {
  require(!cash_flows.empty(), ErrorKind::invalid_argument,
          "npv: need at least the year-zero flow");
  require(rate > -1.0, ErrorKind::invalid_argument,
          "npv: discount rate must exceed -1");
  double total = 0.0;
  double factor = 1.0;
  for (double cf : cash_flows) {
    total += cf / factor;
    factor *= 1.0 + rate;
  }
  return total;
}

// Year 0 carries the capital; years 1..horizon carry the operating cost
// compounding with inflation from year 1.
inline std::vector<double> build_cash_flows(double capital_usd,
                                            double operating_year1_usd,
                                            const CostParams& costs) {
  costs.validate();
  require(std::isfinite(capital_usd) && std::isfinite(operating_year1_usd),
          ErrorKind::invalid_argument, "cash flows: inputs must be finite");
  std::vector<double> flows(static_cast<std::size_t>(costs.horizon_years) + 1,
                            0.0);
  flows[0] = capital_usd;
  double op = operating_year1_usd;
  for (int t = 1; t <= costs.horizon_years; ++t) {
    flows[static_cast<std::size_t>(t)] = op;
    op *= 1.0 + costs.inflation_rate;
  }
  return flows;
}

// ---- design-load derivation -------------------------------------------------------

// Reduce the shaved hourly profiles to the block inputs the borefield sizing
// needs.  Block load = peak of the shaved profile (equals c when the profile
// clips).  Equivalent full-load hours = shaved annual energy over the block
// load.  The monthly part-load factor comes from the dominant mode's shaved
// profile: mean over peak within its highest-energy month, months taken as
// twelve equal 730-hour blocks.
inline DesignLoads derive_design_loads(const LoadProfile& heating,
                                       const LoadProfile& cooling,
                                       double c_kw) {
  heating.validate("heating profile");
  cooling.validate("cooling profile");
  require(c_kw >= 0.0, ErrorKind::invalid_argument,
          "design loads: capacity threshold must be >= 0");

  auto shave = [&](const LoadProfile& p) {
    std::vector<double> s(p.values_kw.size());
    for (std::size_t i = 0; i < s.size(); ++i)
      s[i] = std::min(p.values_kw[i], c_kw);
    return s;
  };
  const std::vector<double> cool = shave(cooling);
  const std::vector<double> heat = shave(heating);

  DesignLoads out;
  out.block_cooling_kw = max_value(cool);
  out.block_heating_kw = max_value(heat);
  const double cool_energy = sum(cool);
  const double heat_energy = sum(heat);
  // The ratio cannot exceed the year length; summation rounding on a flat
  // shaved profile can nudge it a few ulp above, so clamp.
  const double year = static_cast<double>(hours_per_year);
  out.eflh_cooling_hours =
      out.block_cooling_kw > 0.0
          ? std::min(cool_energy / out.block_cooling_kw, year)
          : 0.0;
  out.eflh_heating_hours =
      out.block_heating_kw > 0.0
          ? std::min(heat_energy / out.block_heating_kw, year)
          : 0.0;

  const std::vector<double>& dom = cool_energy >= heat_energy ? cool : heat;
  constexpr int kMonthHours = hours_per_year / 12;  // 730
  double best_energy = -1.0;
  int best_month = 0;
  for (int m = 0; m < 12; ++m) {
    double e = 0.0;
    for (int h = 0; h < kMonthHours; ++h) e += dom[m * kMonthHours + h];
    if (e > best_energy) {
      best_energy = e;
      best_month = m;
    }
  }
  double month_peak = 0.0;
  double month_sum = 0.0;
  for (int h = 0; h < kMonthHours; ++h) {
    const double v = dom[best_month * kMonthHours + h];
    month_peak = std::max(month_peak, v);
    month_sum += v;
  }
  out.part_load_factor_month =
      month_peak > 0.0
          ? std::min((month_sum / kMonthHours) / month_peak, 1.0)
          : 1.0;
  return out;
}

// ---- the sweep --------------------------------------------------------------------

struct HybridDesign {
  ShaveFactors shave;
  SizingResult sizing;
  double capital_cost_usd = 0.0;
  double annual_operating_cost_year1_usd = 0.0;
  double npv_total_usd = 0.0;
  std::vector<double> cash_flows_usd;  // indices 0..horizon
};

struct SweepRow {
  double alpha = 0.0;
  double beta = 0.0;
  double threshold_kw = 0.0;
  int boreholes = 0;
  double capital_usd = std::numeric_limits<double>::quiet_NaN();
  double opex_year1_usd = std::numeric_limits<double>::quiet_NaN();
  double npv_usd = std::numeric_limits<double>::quiet_NaN();
  bool feasible = false;
};

struct OptimizeResult {
  HybridDesign best;
  std::vector<SweepRow> sweep;  // one row per alpha, ascending
  std::vector<std::string> warnings;
};

// Sweep alpha over {0.00, 0.01, ..., 1.00}, size the borefield for each
// candidate's shaved loads, and pick the smallest 20-year net present cost.
// Ties break toward smaller alpha.  Candidates whose field cannot be sized
// are kept in the table as infeasible rows; only a sweep with no feasible
// candidate at all is an error.  The ground-loop COPs in `cond` are taken
// from `cops` so the sizing and the energy accounting cannot disagree.
inline OptimizeResult optimize_hybrid(const LoadProfile& heating,
                                      const LoadProfile& cooling,
                                      const GroundProperties& ground,
                                      const PulseSchedule& pulses,
                                      const DesignConditions& cond,
                                      const CostParams& costs,
                                      const CopSet& cops) {
  heating.validate("heating profile");
  cooling.validate("cooling profile");
  costs.validate();
  cops.validate();

  DesignConditions local = cond;
  local.cop_cooling = cops.gshp_cooling;
  local.cop_heating = cops.gshp_heating;

  const double peak_c = max_value(cooling.values_kw);
  const double peak_h = max_value(heating.values_kw);
  const double cool_total = sum(cooling.values_kw);

  OptimizeResult out;
  out.warnings = cops.warnings();
  out.sweep.reserve(101);
  double best_npv = std::numeric_limits<double>::infinity();

  for (int k = 0; k <= 100; ++k) {
    const double alpha = static_cast<double>(k) / 100.0;
    SweepRow row;
    row.alpha = alpha;
    row.threshold_kw =
        cool_total > 0.0 ? threshold_for_alpha(cooling, alpha) : 0.0;
    row.beta = beta_from_alpha(heating, row.threshold_kw);

    const DesignLoads loads =
        derive_design_loads(heating, cooling, row.threshold_kw);
    SizingResult sizing;
    try {
      sizing = size_borefield(loads, ground, pulses, local);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::infeasible) {
        out.sweep.push_back(row);  // recorded, costs left empty
        continue;
      }
      throw;
    }
    row.feasible = true;
    row.boreholes = sizing.borehole_count;

    const ElectricitySplit split =
        annual_electricity_split(heating, cooling, row.threshold_kw, cops);
    const double gshp_capacity_kw = row.threshold_kw;
    const double ashp_capacity_kw = std::max(
        0.0, std::max(peak_c, peak_h) - row.threshold_kw);
    row.capital_usd =
        capital_cost(sizing, gshp_capacity_kw, ashp_capacity_kw, costs);
    row.opex_year1_usd =
        (split.gshp_kwh + split.ashp_kwh) * costs.electricity_price_per_kwh;
    std::vector<double> flows =
        build_cash_flows(row.capital_usd, row.opex_year1_usd, costs);
    row.npv_usd = npv(flows, costs.interest_rate);
    out.sweep.push_back(row);

    if (row.npv_usd < best_npv) {
      best_npv = row.npv_usd;
      out.best.shave = ShaveFactors{alpha, row.beta, row.threshold_kw};
      out.best.sizing = sizing;
      out.best.capital_cost_usd = row.capital_usd;
      out.best.annual_operating_cost_year1_usd = row.opex_year1_usd;
      out.best.npv_total_usd = row.npv_usd;
      out.best.cash_flows_usd = std::move(flows);
    }
  }

  require(std::isfinite(best_npv), ErrorKind::infeasible,
          "optimize: every candidate in the sweep failed to size");
  out.best.shave.validate();
  return out;
}

}  // namespace ghp
