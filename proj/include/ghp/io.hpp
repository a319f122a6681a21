#pragma once
// CSV I/O for the toolkit: load profiles, weather series, metered building
// records, heat-pump performance maps, sweep tables, simulation time series,
// and a g-function disk cache.
//
// All writers emit a header line followed by LF-terminated rows and format
// numbers with the shortest round-trip representation, so identical inputs
// always produce byte-identical files.  Readers check the header verbatim
// and report the offending path, line, and field on any malformed input.

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ghp/common.hpp"
#include "ghp/ground_response.hpp"
#include "ghp/heat_pump.hpp"
#include "ghp/hybrid_optimizer.hpp"
#include "ghp/load_model.hpp"
#include "ghp/plant_sim.hpp"

namespace ghp {

namespace detail {

// Shortest representation that parses back to the same double.
inline std::string format_csv(double v) {
  require(std::isfinite(v), ErrorKind::invalid_argument,
          "csv: refusing to write a non-finite number");
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_csv(int v) { return std::to_string(v); }

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

inline double parse_csv_double(std::string_view field, const std::string& path,
                               std::size_t line_no, const char* column) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto res = std::from_chars(first, last, v);
  require(res.ec == std::errc() && res.ptr == last && !field.empty(),
          ErrorKind::invalid_argument,
          path + ":" + std::to_string(line_no) + ": column '" + column +
              "': cannot parse '" + std::string(field) + "' as a number");
  return v;
}

inline bool csv_missing(std::string_view field) {
  return field.empty() || field == "-";
}

// Whole file as lines, trailing CR stripped; a trailing blank line ignored.
inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::io, "cannot open '" + path + "' for reading");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  require(!lines.empty(), ErrorKind::insufficient_data,
          "'" + path + "' is empty");
  return lines;
}

inline void expect_header(const std::vector<std::string>& lines,
                          const std::string& expected,
                          const std::string& path) {
  require(std::string(trim(lines.front())) == expected,
          ErrorKind::invalid_argument,
          path + ": expected header '" + expected + "', got '" +
              lines.front() + "'");
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorKind::io, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  require(out.good(), ErrorKind::io, "short write to '" + path + "'");
}

}  // namespace detail

// ---- load profiles --------------------------------------------------------

struct ProfilePair {
  LoadProfile heating;
  LoadProfile cooling;
};

// Header `hour,heating_kw,cooling_kw`; 8760 rows; hour column must run
// 0..8759 in order.
inline ProfilePair read_profile_csv(const std::string& path) {
  const auto lines = detail::read_lines(path);
  detail::expect_header(lines, "hour,heating_kw,cooling_kw", path);
  require(lines.size() == 1 + hours_per_year, ErrorKind::invalid_argument,
          path + ": expected " + std::to_string(hours_per_year) +
              " data rows, got " + std::to_string(lines.size() - 1));
  ProfilePair out;
  out.heating.mode = LoadMode::heating;
  out.cooling.mode = LoadMode::cooling;
  out.heating.provenance = Provenance::metered;
  out.cooling.provenance = Provenance::metered;
  out.heating.values_kw.reserve(hours_per_year);
  out.cooling.values_kw.reserve(hours_per_year);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = detail::split_csv(lines[i]);
    require(f.size() == 3, ErrorKind::invalid_argument,
            path + ":" + std::to_string(i + 1) + ": expected 3 fields, got " +
                std::to_string(f.size()));
    const double hour = detail::parse_csv_double(f[0], path, i + 1, "hour");
    require(hour == static_cast<double>(i - 1), ErrorKind::invalid_argument,
            path + ":" + std::to_string(i + 1) + ": hour column must be " +
                std::to_string(i - 1));
    out.heating.values_kw.push_back(
        detail::parse_csv_double(f[1], path, i + 1, "heating_kw"));
    out.cooling.values_kw.push_back(
        detail::parse_csv_double(f[2], path, i + 1, "cooling_kw"));
  }
  out.heating.validate(path + " (heating)");
  out.cooling.validate(path + " (cooling)");
  return out;
}

inline void write_profile_csv(const std::string& path,
                              const LoadProfile& heating,
                              const LoadProfile& cooling) {
  heating.validate("heating profile");
  cooling.validate("cooling profile");
  require(heating.mode == LoadMode::heating && cooling.mode == LoadMode::cooling,
          ErrorKind::invalid_argument,
          "write_profile_csv: profiles must be a heating/cooling pair");
  std::string text = "hour,heating_kw,cooling_kw\n";
  for (std::size_t h = 0; h < hours_per_year; ++h) {
    text += std::to_string(h);
    text += ',';
    text += detail::format_csv(heating.values_kw[h]);
    text += ',';
    text += detail::format_csv(cooling.values_kw[h]);
    text += '\n';
  }
  detail::write_text(path, text);
}

// ---- weather series -------------------------------------------------------

// Header `hour,outdoor_drybulb_c`; 8760 rows, hour 0..8759.
inline std::vector<double> read_weather_csv(const std::string& path) {
  const auto lines = detail::read_lines(path);
  detail::expect_header(lines, "hour,outdoor_drybulb_c", path);
  require(lines.size() == 1 + hours_per_year, ErrorKind::invalid_argument,
          path + ": expected " + std::to_string(hours_per_year) +
              " data rows, got " + std::to_string(lines.size() - 1));
  std::vector<double> out;
  out.reserve(hours_per_year);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = detail::split_csv(lines[i]);
    require(f.size() == 2, ErrorKind::invalid_argument,
            path + ":" + std::to_string(i + 1) + ": expected 2 fields, got " +
                std::to_string(f.size()));
    const double hour = detail::parse_csv_double(f[0], path, i + 1, "hour");
    require(hour == static_cast<double>(i - 1), ErrorKind::invalid_argument,
            path + ":" + std::to_string(i + 1) + ": hour column must be " +
                std::to_string(i - 1));
    out.push_back(
        detail::parse_csv_double(f[1], path, i + 1, "outdoor_drybulb_c"));
  }
  return out;
}

inline void write_weather_csv(const std::string& path,
                              const std::vector<double>& outdoor_c) {
  require(outdoor_c.size() == hours_per_year, ErrorKind::invalid_argument,
          "write_weather_csv: expected 8760 hourly values, got " +
              std::to_string(outdoor_c.size()));
  std::string text = "hour,outdoor_drybulb_c\n";
  for (std::size_t h = 0; h < outdoor_c.size(); ++h) {
    text += std::to_string(h);
    text += ',';
    text += detail::format_csv(outdoor_c[h]);
    text += '\n';
  }
  detail::write_text(path, text);
}

// ---- metered building records ----------------------------------------------

// Header `name,building_type,floor_area_m2,annual_steam_kbtu,
// annual_electricity_kwh,cooling_electricity_kwh,peak_heating_kbtu_h,
// peak_cooling_tons`; `-` or an empty field marks a missing measurement.
inline std::vector<BuildingRecord> read_building_records_csv(
    const std::string& path) {
  static const std::string kHeader =
      "name,building_type,floor_area_m2,annual_steam_kbtu,"
      "annual_electricity_kwh,cooling_electricity_kwh,peak_heating_kbtu_h,"
      "peak_cooling_tons";
  const auto lines = detail::read_lines(path);
  detail::expect_header(lines, kHeader, path);
  require(lines.size() > 1, ErrorKind::insufficient_data,
          path + ": no building records");
  std::vector<BuildingRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = detail::split_csv(lines[i]);
    require(f.size() == 8, ErrorKind::invalid_argument,
            path + ":" + std::to_string(i + 1) + ": expected 8 fields, got " +
                std::to_string(f.size()));
    BuildingRecord rec;
    rec.name = std::string(f[0]);
    require(!rec.name.empty(), ErrorKind::invalid_argument,
            path + ":" + std::to_string(i + 1) + ": building name is empty");
    rec.type = parse_building_type(std::string(f[1]));
    rec.floor_area_m2 =
        detail::parse_csv_double(f[2], path, i + 1, "floor_area_m2");
    auto opt = [&](std::string_view field,
                   const char* column) -> std::optional<double> {
      if (detail::csv_missing(field)) return std::nullopt;
      return detail::parse_csv_double(field, path, i + 1, column);
    };
    rec.annual_steam_kbtu = opt(f[3], "annual_steam_kbtu");
    rec.annual_electricity_kwh = opt(f[4], "annual_electricity_kwh");
    rec.cooling_electricity_kwh = opt(f[5], "cooling_electricity_kwh");
    rec.peak_heating_kbtu_h = opt(f[6], "peak_heating_kbtu_h");
    rec.peak_cooling_tons = opt(f[7], "peak_cooling_tons");
    out.push_back(std::move(rec));
  }
  return out;
}

// ---- heat-pump performance maps ---------------------------------------------

// Header `t_load_c,t_source_c,mdot_load,mdot_source,capacity_w,power_w`.
inline std::vector<PerformancePoint> read_performance_map_csv(
    const std::string& path) {
  static const std::string kHeader =
      "t_load_c,t_source_c,mdot_load,mdot_source,capacity_w,power_w";
  const auto lines = detail::read_lines(path);
  detail::expect_header(lines, kHeader, path);
  require(lines.size() > 1, ErrorKind::insufficient_data,
          path + ": no performance points");
  std::vector<PerformancePoint> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = detail::split_csv(lines[i]);
    require(f.size() == 6, ErrorKind::invalid_argument,
            path + ":" + std::to_string(i + 1) + ": expected 6 fields, got " +
                std::to_string(f.size()));
    PerformancePoint p;
    p.t_load_c = detail::parse_csv_double(f[0], path, i + 1, "t_load_c");
    p.t_source_c = detail::parse_csv_double(f[1], path, i + 1, "t_source_c");
    p.mdot_load_kg_s = detail::parse_csv_double(f[2], path, i + 1, "mdot_load");
    p.mdot_source_kg_s =
        detail::parse_csv_double(f[3], path, i + 1, "mdot_source");
    p.capacity_w = detail::parse_csv_double(f[4], path, i + 1, "capacity_w");
    p.power_w = detail::parse_csv_double(f[5], path, i + 1, "power_w");
    out.push_back(p);
  }
  return out;
}

inline void write_performance_map_csv(
    const std::string& path, const std::vector<PerformancePoint>& points) {
  require(!points.empty(), ErrorKind::invalid_argument,
          "write_performance_map_csv: no points");
  std::string text =
      "t_load_c,t_source_c,mdot_load,mdot_source,capacity_w,power_w\n";
  for (const PerformancePoint& p : points) {
    text += detail::format_csv(p.t_load_c);
    text += ',';
    text += detail::format_csv(p.t_source_c);
    text += ',';
    text += detail::format_csv(p.mdot_load_kg_s);
    text += ',';
    text += detail::format_csv(p.mdot_source_kg_s);
    text += ',';
    text += detail::format_csv(p.capacity_w);
    text += ',';
    text += detail::format_csv(p.power_w);
    text += '\n';
  }
  detail::write_text(path, text);
}

// ---- hybrid sweep table -----------------------------------------------------

// Header `alpha,beta,threshold_kw,boreholes,capital_usd,opex_year1_usd,
// npv_usd,feasible`; infeasible rows leave the cost columns empty.
inline void write_sweep_csv(const std::string& path,
                            const std::vector<SweepRow>& rows) {
  require(!rows.empty(), ErrorKind::invalid_argument,
          "write_sweep_csv: no rows");
  std::string text =
      "alpha,beta,threshold_kw,boreholes,capital_usd,opex_year1_usd,npv_usd,"
      "feasible\n";
  for (const SweepRow& r : rows) {
    text += detail::format_csv(r.alpha);
    text += ',';
    text += detail::format_csv(r.beta);
    text += ',';
    text += detail::format_csv(r.threshold_kw);
    text += ',';
    text += detail::format_csv(r.boreholes);
    text += ',';
    text += r.feasible ? detail::format_csv(r.capital_usd) : std::string();
    text += ',';
    text += r.feasible ? detail::format_csv(r.opex_year1_usd) : std::string();
    text += ',';
    text += r.feasible ? detail::format_csv(r.npv_usd) : std::string();
    text += ',';
    text += r.feasible ? '1' : '0';
    text += '\n';
  }
  detail::write_text(path, text);
}

inline std::vector<SweepRow> read_sweep_csv(const std::string& path) {
  static const std::string kHeader =
      "alpha,beta,threshold_kw,boreholes,capital_usd,opex_year1_usd,npv_usd,"
      "feasible";
  const auto lines = detail::read_lines(path);
  detail::expect_header(lines, kHeader, path);
  require(lines.size() > 1, ErrorKind::insufficient_data,
          path + ": no sweep rows");
  std::vector<SweepRow> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = detail::split_csv(lines[i]);
    require(f.size() == 8, ErrorKind::invalid_argument,
            path + ":" + std::to_string(i + 1) + ": expected 8 fields, got " +
                std::to_string(f.size()));
    SweepRow r;
    r.alpha = detail::parse_csv_double(f[0], path, i + 1, "alpha");
    r.beta = detail::parse_csv_double(f[1], path, i + 1, "beta");
    r.threshold_kw =
        detail::parse_csv_double(f[2], path, i + 1, "threshold_kw");
    r.boreholes = static_cast<int>(
        detail::parse_csv_double(f[3], path, i + 1, "boreholes"));
    r.feasible = f[7] == "1";
    if (r.feasible) {
      r.capital_usd =
          detail::parse_csv_double(f[4], path, i + 1, "capital_usd");
      r.opex_year1_usd =
          detail::parse_csv_double(f[5], path, i + 1, "opex_year1_usd");
      r.npv_usd = detail::parse_csv_double(f[6], path, i + 1, "npv_usd");
    } else {
      require(detail::csv_missing(f[4]) && detail::csv_missing(f[5]) &&
                  detail::csv_missing(f[6]),
              ErrorKind::invalid_argument,
              path + ":" + std::to_string(i + 1) +
                  ": infeasible row carries cost values");
    }
    out.push_back(r);
  }
  return out;
}

// ---- simulation time series --------------------------------------------------

// Header `hour,indoor_c,loop_supply_c,loop_return_c,gshp_kw,ashp_kw,heater_kw,
// pump_kw`; loop columns are empty for air-only plants.
inline void write_timeseries_csv(const std::string& path,
                                 const SimulationResult& result) {
  const std::size_t n = result.indoor_c.size();
  const bool has_loop = !result.loop_supply_c.empty();
  require(!has_loop || (result.loop_supply_c.size() == n &&
                        result.loop_return_c.size() == n),
          ErrorKind::invalid_argument,
          "write_timeseries_csv: loop series length mismatch");
  require(result.gshp_kw.size() == n && result.ashp_kw.size() == n &&
              result.heater_kw.size() == n && result.pump_kw.size() == n,
          ErrorKind::invalid_argument,
          "write_timeseries_csv: power series length mismatch");
  std::string text =
      "hour,indoor_c,loop_supply_c,loop_return_c,gshp_kw,ashp_kw,heater_kw,"
      "pump_kw\n";
  for (std::size_t h = 0; h < n; ++h) {
    text += std::to_string(h);
    text += ',';
    text += detail::format_csv(result.indoor_c[h]);
    text += ',';
    if (has_loop) text += detail::format_csv(result.loop_supply_c[h]);
    text += ',';
    if (has_loop) text += detail::format_csv(result.loop_return_c[h]);
    text += ',';
    text += detail::format_csv(result.gshp_kw[h]);
    text += ',';
    text += detail::format_csv(result.ashp_kw[h]);
    text += ',';
    text += detail::format_csv(result.heater_kw[h]);
    text += ',';
    text += detail::format_csv(result.pump_kw[h]);
    text += '\n';
  }
  detail::write_text(path, text);
}

// ---- g-function disk cache ----------------------------------------------------

// Header `time_s,value`.  The fingerprint is carried by the caller (it names
// the cache file); the loaded table revalidates shape and monotonicity.
inline void store_gfunction_csv(const std::string& path,
                                const GFunctionTable& table) {
  table.validate();
  std::string text = "time_s,value\n";
  for (std::size_t i = 0; i < table.times_s.size(); ++i) {
    text += detail::format_csv(table.times_s[i]);
    text += ',';
    text += detail::format_csv(table.values[i]);
    text += '\n';
  }
  detail::write_text(path, text);
}

inline GFunctionTable load_gfunction_csv(const std::string& path,
                                         const std::string& fingerprint) {
  const auto lines = detail::read_lines(path);
  detail::expect_header(lines, "time_s,value", path);
  require(lines.size() > 1, ErrorKind::insufficient_data,
          path + ": no g-function knots");
  GFunctionTable table;
  table.fingerprint = fingerprint;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = detail::split_csv(lines[i]);
    require(f.size() == 2, ErrorKind::invalid_argument,
            path + ":" + std::to_string(i + 1) + ": expected 2 fields, got " +
                std::to_string(f.size()));
    table.times_s.push_back(
        detail::parse_csv_double(f[0], path, i + 1, "time_s"));
    table.values.push_back(
        detail::parse_csv_double(f[1], path, i + 1, "value"));
  }
  table.validate();
  return table;
}

}  // namespace ghp
