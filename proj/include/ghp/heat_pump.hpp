#pragma once

// Equation-fit water-to-water / air-to-water heat pump model.
//
// Capacity and electrical power are affine in the ratios of the operating
// state to a reference state:
//
//   Q   = (a1 + a2 T_load/T_ref_load + a3 T_source/T_ref_source
//             + a4 m_load/m_ref_load + a5 m_source/m_ref_source) * Q_ref
//   P   = (b1 + b2 T_load/T_ref_load + b3 T_source/T_ref_source
//             + b4 m_load/m_ref_load + b5 m_source/m_ref_source) * P_ref
//
// Temperature ratios are between absolute temperatures, so the model stores
// its references in Kelvin and the evaluation entry points take Kelvin.
// Catalogue rows (PerformancePoint) carry Celsius as a CSV would; the fit is
// the single place that converts them.

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ghp/common.hpp"
#include "ghp/numerics.hpp"

namespace ghp {

enum class HpMode { heating, cooling };

inline std::string to_string(HpMode m) {
  return m == HpMode::heating ? "heating" : "cooling";
}

struct HeatPumpModel {
  HpMode mode = HpMode::heating;
  std::array<double, 5> capacity_coefficients{};  // a1..a5
  std::array<double, 5> power_coefficients{};     // b1..b5

  double q_ref_w = 0.0;  // thermal capacity at the reference state
  double p_ref_w = 0.0;  // electrical power at the reference state

  double t_ref_load_k = 0.0;    // absolute reference load-side temperature
  double t_ref_source_k = 0.0;  // absolute reference source-side temperature
  double mdot_ref_load_kg_s = 0.0;
  double mdot_ref_source_kg_s = 0.0;

  // Below this fraction of the reference source flow the unit will not run.
  double min_flow_fraction = 0.2;

  void validate() const {
    require(q_ref_w > 0.0, ErrorKind::invalid_argument,
            "heat pump model: reference capacity must be positive");
    require(p_ref_w > 0.0, ErrorKind::invalid_argument,
            "heat pump model: reference power must be positive");
    // A reference below 150 K is almost certainly a Celsius value that was
    // never converted; reject it rather than produce garbage ratios.
    require(t_ref_load_k > 150.0 && t_ref_source_k > 150.0,
            ErrorKind::invalid_argument,
            "heat pump model: reference temperatures must be absolute "
            "(Kelvin)");
    require(mdot_ref_load_kg_s > 0.0 && mdot_ref_source_kg_s > 0.0,
            ErrorKind::invalid_argument,
            "heat pump model: reference flows must be positive");
    require(min_flow_fraction >= 0.0 && min_flow_fraction <= 1.0,
            ErrorKind::invalid_argument,
            "heat pump model: minimum flow fraction must lie in [0, 1]");
  }
};

namespace detail {

inline double equation_fit(const std::array<double, 5>& c, double scale,
                           const HeatPumpModel& hp, double t_load_k,
                           double t_source_k, double mdot_load_kg_s,
                           double mdot_source_kg_s) {
  require(t_load_k > 150.0 && t_source_k > 150.0,
          ErrorKind::invalid_argument,
          "heat pump evaluation: temperatures must be absolute (Kelvin)");
  require(mdot_load_kg_s >= 0.0 && mdot_source_kg_s >= 0.0,
          ErrorKind::invalid_argument,
          "heat pump evaluation: flows must be nonnegative");
  const double v = c[0] + c[1] * (t_load_k / hp.t_ref_load_k) +
                   c[2] * (t_source_k / hp.t_ref_source_k) +
                   c[3] * (mdot_load_kg_s / hp.mdot_ref_load_kg_s) +
                   c[4] * (mdot_source_kg_s / hp.mdot_ref_source_kg_s);
  return v * scale;
}

}  // namespace detail

// Thermal capacity delivered on the load side, W.  Clamped at zero: the
// affine map can extrapolate negative far from the fitted range, which has
// no physical meaning.
inline double hp_capacity(const HeatPumpModel& hp, double t_load_k,
                          double t_source_k, double mdot_load_kg_s,
                          double mdot_source_kg_s) {
  hp.validate();
  const double q =
      detail::equation_fit(hp.capacity_coefficients, hp.q_ref_w, hp, t_load_k,
                           t_source_k, mdot_load_kg_s, mdot_source_kg_s);
  return std::max(q, 0.0);
}

// Electrical power drawn, W.  Clamped at zero like capacity.
inline double hp_power(const HeatPumpModel& hp, double t_load_k,
                       double t_source_k, double mdot_load_kg_s,
                       double mdot_source_kg_s) {
  hp.validate();
  const double p =
      detail::equation_fit(hp.power_coefficients, hp.p_ref_w, hp, t_load_k,
                           t_source_k, mdot_load_kg_s, mdot_source_kg_s);
  return std::max(p, 0.0);
}

// Coefficient of performance Q/P with the power floored at 1 W so the ratio
// stays finite when the power fit extrapolates to ~zero.
inline double hp_cop(const HeatPumpModel& hp, double t_load_k,
                     double t_source_k, double mdot_load_kg_s,
                     double mdot_source_kg_s) {
  const double q = hp_capacity(hp, t_load_k, t_source_k, mdot_load_kg_s,
                               mdot_source_kg_s);
  const double p =
      hp_power(hp, t_load_k, t_source_k, mdot_load_kg_s, mdot_source_kg_s);
  return q / std::max(p, 1.0);
}

// One catalogue row.  Temperatures in Celsius (as shipped in CSV form),
// flows in kg/s, capacity and power in W.
struct PerformancePoint {
  double t_load_c = 0.0;
  double t_source_c = 0.0;
  double mdot_load_kg_s = 0.0;
  double mdot_source_kg_s = 0.0;
  double capacity_w = 0.0;
  double power_w = 0.0;
};

struct PerformanceFit {
  HeatPumpModel model;
  // Worst-case |fit - data| across rows, relative to the reference capacity
  // and power respectively.
  double capacity_residual = 0.0;
  double power_residual = 0.0;
};

// Fit the ten equation coefficients from catalogue rows by least squares.
// `references` supplies everything except the coefficients (mode, reference
// state, flow floor); its coefficient arrays are ignored and replaced.
// Capacity and power are fitted independently against the same design
// matrix.  Needs at least five rows of full rank; a rank-deficient matrix
// (e.g. every row at the reference state) is rejected with the collinear
// columns named.
inline PerformanceFit fit_performance_map(
    const std::vector<PerformancePoint>& rows,
    const HeatPumpModel& references) {
  references.validate();
  require(rows.size() >= 5, ErrorKind::insufficient_data,
          "fit performance map: need at least five catalogue rows, got " +
              std::to_string(rows.size()));

  const std::size_t n = rows.size();
  constexpr std::size_t kCols = 5;
  const std::vector<std::string> names = {"constant", "t_load_ratio",
                                          "t_source_ratio", "mdot_load_ratio",
                                          "mdot_source_ratio"};

  std::vector<double> a(n * kCols, 0.0);  // column-major
  std::vector<double> yq(n, 0.0), yp(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const PerformancePoint& r = rows[i];
    require(r.mdot_load_kg_s > 0.0 && r.mdot_source_kg_s > 0.0,
            ErrorKind::invalid_argument,
            "fit performance map: catalogue flows must be positive");
    const double t_load_k = r.t_load_c + celsius_to_kelvin;
    const double t_source_k = r.t_source_c + celsius_to_kelvin;
    a[0 * n + i] = 1.0;
    a[1 * n + i] = t_load_k / references.t_ref_load_k;
    a[2 * n + i] = t_source_k / references.t_ref_source_k;
    a[3 * n + i] = r.mdot_load_kg_s / references.mdot_ref_load_kg_s;
    a[4 * n + i] = r.mdot_source_kg_s / references.mdot_ref_source_kg_s;
    yq[i] = r.capacity_w / references.q_ref_w;
    yp[i] = r.power_w / references.p_ref_w;
  }

  const LeastSquaresResult fq = least_squares(a, n, kCols, yq, names);
  const LeastSquaresResult fp = least_squares(a, n, kCols, yp, names);

  PerformanceFit out;
  out.model = references;
  for (std::size_t k = 0; k < kCols; ++k) {
    out.model.capacity_coefficients[k] = fq.coefficients[k];
    out.model.power_coefficients[k] = fp.coefficients[k];
  }
  // Residuals were computed on the normalized targets, so they are already
  // relative to the references.
  out.capacity_residual = fq.max_abs_residual;
  out.power_residual = fp.max_abs_residual;
  return out;
}

// ---- stand-in catalogue maps ------------------------------------------------
//
// Manufacturer catalogue data cannot be shipped, so the toolkit carries
// synthetic maps with documented coefficients.  The coefficient sets sum to
// one, so each unit delivers exactly its reference capacity and power at the
// reference state, and the signs follow the physics: heating capacity rises
// with source temperature and falls with load (condenser) temperature,
// cooling capacity the reverse; power moves against the cycle lift.
//
// Reference flows are sized for a 5 K temperature change at reference
// capacity: the load loop carries Q, the source loop carries Q -/+ P
// (heating extracts Q - P from the source; cooling rejects Q + P).

namespace detail {

inline HeatPumpModel synthetic_map(HpMode mode, double q_ref_w,
                                   double cop_ref, double t_ref_load_c,
                                   double t_ref_source_c,
                                   const std::array<double, 5>& alpha,
                                   const std::array<double, 5>& beta) {
  require(q_ref_w > 0.0, ErrorKind::invalid_argument,
          "synthetic map: reference capacity must be positive");
  require(cop_ref > 1.0, ErrorKind::invalid_argument,
          "synthetic map: reference COP must exceed one");
  HeatPumpModel hp;
  hp.mode = mode;
  hp.capacity_coefficients = alpha;
  hp.power_coefficients = beta;
  hp.q_ref_w = q_ref_w;
  hp.p_ref_w = q_ref_w / cop_ref;
  hp.t_ref_load_k = t_ref_load_c + celsius_to_kelvin;
  hp.t_ref_source_k = t_ref_source_c + celsius_to_kelvin;
  const double design_dt_k = 5.0;
  hp.mdot_ref_load_kg_s = q_ref_w / (cp_water * design_dt_k);
  const double source_side_w = (mode == HpMode::heating)
                                   ? q_ref_w - hp.p_ref_w
                                   : q_ref_w + hp.p_ref_w;
  hp.mdot_ref_source_kg_s = source_side_w / (cp_water * design_dt_k);
  hp.validate();
  return hp;
}

}  // namespace detail

// Ground-loop unit heating a 50 C distribution loop from an 8 C source loop;
// COP 3.5 at reference.
inline HeatPumpModel synthetic_gshp_heating(double q_ref_w) {
  return detail::synthetic_map(HpMode::heating, q_ref_w, 3.5,
                               /*t_ref_load_c=*/50.0, /*t_ref_source_c=*/8.0,
                               {-1.0, -1.2, 3.0, 0.1, 0.1},
                               {-0.1, 2.0, -1.0, 0.05, 0.05});
}

// Ground-loop unit chilling a 10 C distribution loop against a 25 C source
// loop; COP 5.5 at reference.
inline HeatPumpModel synthetic_gshp_cooling(double q_ref_w) {
  return detail::synthetic_map(HpMode::cooling, q_ref_w, 5.5,
                               /*t_ref_load_c=*/10.0, /*t_ref_source_c=*/25.0,
                               {1.8, 1.0, -2.0, 0.1, 0.1},
                               {-1.1, -0.5, 2.5, 0.05, 0.05});
}

// Air-source unit heating a 50 C loop from 7 C outdoor air; COP 2.5 at
// reference.  Same coefficient shape as the ground unit, so capacity fades
// sharply as the air cools.
inline HeatPumpModel synthetic_ashp_heating(double q_ref_w) {
  return detail::synthetic_map(HpMode::heating, q_ref_w, 2.5,
                               /*t_ref_load_c=*/50.0, /*t_ref_source_c=*/7.0,
                               {-1.0, -1.2, 3.0, 0.1, 0.1},
                               {-0.1, 2.0, -1.0, 0.05, 0.05});
}

// Air-source unit chilling a 10 C loop against 35 C outdoor air; COP 4.5 at
// reference.
inline HeatPumpModel synthetic_ashp_cooling(double q_ref_w) {
  return detail::synthetic_map(HpMode::cooling, q_ref_w, 4.5,
                               /*t_ref_load_c=*/10.0, /*t_ref_source_c=*/35.0,
                               {1.8, 1.0, -2.0, 0.1, 0.1},
                               {-1.1, -0.5, 2.5, 0.05, 0.05});
}

// Evaluate a model over a small factorial grid around its reference state:
// load and source temperatures offset by {-10, -5, 0, +5, +10} K and both
// flows at {0.8, 1.0, 1.2} of reference.  Exact model evaluations, no noise,
// so a fit of the result recovers the coefficients to machine precision.
inline std::vector<PerformancePoint> sample_performance_map(
    const HeatPumpModel& hp) {
  hp.validate();
  const std::array<double, 5> t_offsets = {-10.0, -5.0, 0.0, 5.0, 10.0};
  const std::array<double, 3> flow_fractions = {0.8, 1.0, 1.2};
  std::vector<PerformancePoint> rows;
  rows.reserve(t_offsets.size() * t_offsets.size() * flow_fractions.size() *
               flow_fractions.size());
  for (double dtl : t_offsets) {
    for (double dts : t_offsets) {
      for (double fl : flow_fractions) {
        for (double fs : flow_fractions) {
          PerformancePoint p;
          const double t_load_k = hp.t_ref_load_k + dtl;
          const double t_source_k = hp.t_ref_source_k + dts;
          p.t_load_c = t_load_k - celsius_to_kelvin;
          p.t_source_c = t_source_k - celsius_to_kelvin;
          p.mdot_load_kg_s = fl * hp.mdot_ref_load_kg_s;
          p.mdot_source_kg_s = fs * hp.mdot_ref_source_kg_s;
          p.capacity_w = hp_capacity(hp, t_load_k, t_source_k,
                                     p.mdot_load_kg_s, p.mdot_source_kg_s);
          p.power_w = hp_power(hp, t_load_k, t_source_k, p.mdot_load_kg_s,
                               p.mdot_source_kg_s);
          rows.push_back(p);
        }
      }
    }
  }
  return rows;
}

}  // namespace ghp
