#pragma once
// Pipeline orchestration: the stage functions behind the CLI subcommands and
// the run manifest that ties their artifacts together.
//
// Every stage writes its artifacts under the config's output directory and
// records itself in `manifest.json` with the digest of the config that
// produced it.  A stage that consumes another stage's outputs checks that
// digest first and refuses stale inputs (ErrorKind::stale).  Simulation
// failures are results, not errors: a failed case lands in the summary with
// status "failed" and the stage still succeeds.
//
// Timestamps honour SOURCE_DATE_EPOCH so archival reruns can be byte-stable;
// stage artifacts themselves never contain wall-clock state.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <filesystem>
#include <map>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "ghp/config.hpp"
#include "ghp/io.hpp"

namespace ghp {

// ---- run manifest -----------------------------------------------------------

struct StageRecord {
  std::string status;  // "ok"; per-case simulation failures are data
  std::string timestamp_utc;
  std::string config_digest;
  std::vector<std::string> overrides;
  std::vector<std::string> outputs;  // relative to the output directory
};

struct RunManifest {
  std::string artifact_version = "1";
  std::map<std::string, StageRecord> stages;

  bool has(const std::string& stage) const { return stages.count(stage) > 0; }
};

namespace detail {

inline std::string timestamp_utc() {
  std::time_t t = std::time(nullptr);
  if (const char* e = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(e, &end, 10);
    if (end != e && *end == '\0' && v >= 0) t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec);
  return buf;
}

inline void write_json_file(const std::filesystem::path& path, const Json& j) {
  write_text(path.string(), j.dump(2) + "\n");
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::io,
          "cannot open '" + path.string() + "' for reading");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    fail(ErrorKind::io, "'" + path.string() + "' is not valid JSON: " +
                            std::string(e.what()));
  }
}

}  // namespace detail

inline std::filesystem::path manifest_path(const std::filesystem::path& out) {
  return out / "manifest.json";
}

inline RunManifest load_manifest(const std::filesystem::path& out_dir) {
  const auto path = manifest_path(out_dir);
  RunManifest m;
  if (!std::filesystem::exists(path)) return m;
  const Json j = detail::read_json_file(path);
  detail::check_keys(j, "manifest", {"artifact_version", "stages"});
  detail::get_str(j, "manifest", "artifact_version", m.artifact_version);
  if (auto it = j.find("stages"); it != j.end() && !it->is_null()) {
    require(it->is_object(), ErrorKind::io, "manifest: 'stages' must be an object");
    for (const auto& [name, sj] : it->items()) {
      detail::check_keys(sj, "manifest stage",
                         {"status", "timestamp_utc", "config_digest",
                          "overrides", "outputs"});
      StageRecord rec;
      detail::get_str(sj, "stage", "status", rec.status);
      detail::get_str(sj, "stage", "timestamp_utc", rec.timestamp_utc);
      detail::get_str(sj, "stage", "config_digest", rec.config_digest);
      for (const char* key : {"overrides", "outputs"}) {
        auto arr = sj.find(key);
        if (arr == sj.end() || arr->is_null()) continue;
        require(arr->is_array(), ErrorKind::io,
                std::string("manifest: '") + key + "' must be an array");
        auto& dst = std::string(key) == "overrides" ? rec.overrides : rec.outputs;
        for (const Json& v : *arr) {
          require(v.is_string(), ErrorKind::io,
                  std::string("manifest: '") + key + "' entries must be strings");
          dst.push_back(v.get<std::string>());
        }
      }
      m.stages[name] = std::move(rec);
    }
  }
  return m;
}

inline void save_manifest(const std::filesystem::path& out_dir,
                          const RunManifest& m) {
  Json j;
  j["artifact_version"] = m.artifact_version;
  j["stages"] = Json::object();
  for (const auto& [name, rec] : m.stages) {
    j["stages"][name] = {{"status", rec.status},
                         {"timestamp_utc", rec.timestamp_utc},
                         {"config_digest", rec.config_digest},
                         {"overrides", rec.overrides},
                         {"outputs", rec.outputs}};
  }
  detail::write_json_file(manifest_path(out_dir), j);
}

// ---- run context ------------------------------------------------------------

struct RunContext {
  ProjectConfig cfg;
  std::string digest;
  std::vector<std::string> overrides;
  std::filesystem::path out_dir;
};

inline RunContext make_context(const std::string& config_path,
                               const std::vector<std::string>& overrides = {}) {
  RunContext ctx;
  ctx.cfg = load_project_config(config_path, overrides);
  ctx.digest = config_digest(ctx.cfg);
  ctx.overrides = overrides;
  ctx.out_dir = ctx.cfg.resolve(ctx.cfg.output_dir);
  return ctx;
}

namespace detail {

inline void record_stage(const RunContext& ctx, const std::string& stage,
                         std::vector<std::string> outputs) {
  RunManifest m = load_manifest(ctx.out_dir);
  StageRecord rec;
  rec.status = "ok";
  rec.timestamp_utc = timestamp_utc();
  rec.config_digest = ctx.digest;
  rec.overrides = ctx.overrides;
  rec.outputs = std::move(outputs);
  m.stages[stage] = std::move(rec);
  save_manifest(ctx.out_dir, m);
}

// The profile pair later stages run on: the scale stage's output when it is
// recorded (refusing a digest mismatch), the donor file otherwise.
inline ProfilePair stage_profiles(const RunContext& ctx) {
  const RunManifest m = load_manifest(ctx.out_dir);
  if (m.has("scale")) {
    const StageRecord& rec = m.stages.at("scale");
    require(rec.config_digest == ctx.digest, ErrorKind::stale,
            "scaled profiles in '" + ctx.out_dir.string() +
                "' were produced by config digest " + rec.config_digest +
                ", current digest is " + ctx.digest + "; re-run scale");
    const auto path = ctx.out_dir / "scaled_profiles.csv";
    require(std::filesystem::exists(path), ErrorKind::invalid_argument,
            "manifest records a scale stage but '" + path.string() +
                "' is missing");
    return read_profile_csv(path.string());
  }
  require(!ctx.cfg.paths.profiles.empty(), ErrorKind::invalid_argument,
          "config names no donor profile file and no scale stage has run");
  return read_profile_csv(ctx.cfg.resolve(ctx.cfg.paths.profiles));
}

inline double profile_peak(const LoadProfile& p) {
  return *std::max_element(p.values_kw.begin(), p.values_kw.end());
}

inline double profile_sum(const LoadProfile& p) {
  return std::accumulate(p.values_kw.begin(), p.values_kw.end(), 0.0);
}

}  // namespace detail

// ---- scale ------------------------------------------------------------------

// Calibrate the donor profiles to benchmark targets: explicit `targets` keys
// when present, node benchmarks derived from the metered building records
// otherwise.  Writes the scaled pair and a validation report comparing the
// achieved annual energy and peak against the targets.
inline Json run_scale(const RunContext& ctx) {
  const ProjectConfig& cfg = ctx.cfg;
  require(!cfg.paths.profiles.empty(), ErrorKind::invalid_argument,
          "scale: config names no donor profile file (paths.profiles)");
  const ProfilePair donor = read_profile_csv(cfg.resolve(cfg.paths.profiles));

  BenchmarkTargets heating_t, cooling_t;
  std::vector<std::string> notes;
  if (cfg.targets.heating && cfg.targets.cooling) {
    heating_t = *cfg.targets.heating;
    cooling_t = *cfg.targets.cooling;
  } else {
    require(!cfg.paths.buildings.empty(), ErrorKind::invalid_argument,
            "scale: need either explicit targets for both modes or a metered "
            "building records file (paths.buildings)");
    const auto records =
        read_building_records_csv(cfg.resolve(cfg.paths.buildings));
    const NodeBenchmarks nb = derive_benchmarks(records, cfg.benchmarks);
    heating_t = cfg.targets.heating.value_or(nb.heating);
    cooling_t = cfg.targets.cooling.value_or(nb.cooling);
    notes = nb.notes;
  }

  const ScaledProfile h = scale_profile(donor.heating, heating_t);
  const ScaledProfile c = scale_profile(donor.cooling, cooling_t);

  std::filesystem::create_directories(ctx.out_dir);
  write_profile_csv((ctx.out_dir / "scaled_profiles.csv").string(), h.profile,
                    c.profile);

  auto block = [](const ScaledProfile& s, const BenchmarkTargets& t) {
    const double annual = detail::profile_sum(s.profile);
    const double peak = detail::profile_peak(s.profile);
    return Json{{"target_annual_kwh", t.annual_energy_kwh},
                {"achieved_annual_kwh", annual},
                {"annual_delta_fraction",
                 (annual - t.annual_energy_kwh) / t.annual_energy_kwh},
                {"target_peak_kw", t.peak_kw},
                {"achieved_peak_kw", peak},
                {"peak_delta_fraction", (peak - t.peak_kw) / t.peak_kw},
                {"gain", s.solution.gain},
                {"offset_kw", s.solution.offset},
                {"residual", s.solution.residual},
                {"clamped_hours", s.solution.clamped_hours}};
  };
  Json report = {{"config_digest", ctx.digest},
                 {"heating", block(h, heating_t)},
                 {"cooling", block(c, cooling_t)},
                 {"notes", notes}};
  detail::write_json_file(ctx.out_dir / "scale_report.json", report);

  detail::record_stage(ctx, "scale",
                       {"scaled_profiles.csv", "scale_report.json"});
  return report;
}

// ---- size -------------------------------------------------------------------

// Size a full ground-source borefield (no shaving) for the current profiles.
inline Json run_size(const RunContext& ctx) {
  const ProfilePair pair = detail::stage_profiles(ctx);
  const double c_all = std::max(detail::profile_peak(pair.heating),
                                detail::profile_peak(pair.cooling));
  const DesignLoads loads =
      derive_design_loads(pair.heating, pair.cooling, c_all);
  const SizingResult sized = size_borefield(
      loads, ctx.cfg.ground, ctx.cfg.pulses, ctx.cfg.design_conditions());

  Json out = {{"config_digest", ctx.digest},
              {"q_a_kw", sized.q_a_kw},
              {"l_c_m", sized.l_c_m},
              {"l_h_m", sized.l_h_m},
              {"l_m", sized.l_m},
              {"borehole_count", sized.borehole_count},
              {"borehole_depth_m", sized.borehole_depth_m},
              {"t_p_k", sized.t_p_k},
              {"penalty_iterations", sized.penalty_iterations},
              {"penalty_at_count_boundary", sized.penalty_at_count_boundary},
              {"block_cooling_kw", loads.block_cooling_kw},
              {"block_heating_kw", loads.block_heating_kw},
              {"eflh_cooling_hours", loads.eflh_cooling_hours},
              {"eflh_heating_hours", loads.eflh_heating_hours}};
  std::filesystem::create_directories(ctx.out_dir);
  detail::write_json_file(ctx.out_dir / "sizing.json", out);
  detail::record_stage(ctx, "size", {"sizing.json"});
  return out;
}

// ---- optimize -----------------------------------------------------------------

// Sweep the cooling shave factor, write the full sweep table and the optimum.
// An all-infeasible sweep propagates ErrorKind::infeasible to the caller.
inline Json run_optimize(const RunContext& ctx) {
  const ProfilePair pair = detail::stage_profiles(ctx);
  const OptimizeResult opt = optimize_hybrid(
      pair.heating, pair.cooling, ctx.cfg.ground, ctx.cfg.pulses,
      ctx.cfg.design_conditions(), ctx.cfg.costs, ctx.cfg.cops);

  std::filesystem::create_directories(ctx.out_dir);
  write_sweep_csv((ctx.out_dir / "sweep.csv").string(), opt.sweep);

  Json optimum = {{"config_digest", ctx.digest},
                  {"alpha", opt.best.shave.alpha},
                  {"beta", opt.best.shave.beta},
                  {"threshold_kw", opt.best.shave.capacity_threshold_kw},
                  {"borehole_count", opt.best.sizing.borehole_count},
                  {"borehole_depth_m", opt.best.sizing.borehole_depth_m},
                  {"ground_loop_length_m", opt.best.sizing.l_m},
                  {"capital_cost_usd", opt.best.capital_cost_usd},
                  {"opex_year1_usd", opt.best.annual_operating_cost_year1_usd},
                  {"npv_usd", opt.best.npv_total_usd},
                  {"warnings", opt.warnings}};
  detail::write_json_file(ctx.out_dir / "optimum.json", optimum);

  detail::record_stage(ctx, "optimize", {"sweep.csv", "optimum.json"});
  return optimum;
}

// ---- simulate -----------------------------------------------------------------

namespace detail {

// Attach the case's g-function table, computing it into the on-disk cache on
// first use.  Tables are keyed by the exact fingerprint simulate() checks.
inline void attach_gfunction(PlantConfig& pc,
                             const std::filesystem::path& cache_dir,
                             std::size_t n_hours) {
  if (!pc.source.uses_ground()) return;
  const std::string fp = simulation_gfunction_fingerprint(pc, n_hours);
  const auto path = cache_dir / ("gfn_" + fp + ".csv");
  if (std::filesystem::exists(path)) {
    pc.gfunction = load_gfunction_csv(path.string(), fp);
    return;
  }
  const GFunctionTable table = borefield_gfunction(
      *pc.source.borefield, simulation_time_grid(pc, n_hours), pc.ground);
  require(table.fingerprint == fp, ErrorKind::numeric,
          "g-function cache: fingerprint mismatch on freshly computed table");
  std::filesystem::create_directories(cache_dir);
  store_gfunction_csv(path.string(), table);
  pc.gfunction = table;
}

}  // namespace detail

// Run the configured case matrix (or a comma-separated subset) and write one
// time-series file per case plus a cross-case summary.  A case whose plant
// fails at runtime is reported with status "failed"; the stage succeeds.
// `jobs` bounds the number of concurrently simulated cases; assembly order
// is the selection order regardless of scheduling.
inline Json run_simulate(const RunContext& ctx,
                         const std::string& case_selector = "all",
                         int jobs = 1) {
  const ProjectConfig& cfg = ctx.cfg;
  require(jobs >= 1, ErrorKind::invalid_argument,
          "simulate: --jobs must be >= 1");
  require(!cfg.cases.empty(), ErrorKind::invalid_argument,
          "simulate: config defines no cases");
  require(!cfg.paths.weather.empty(), ErrorKind::invalid_argument,
          "simulate: config names no weather file (paths.weather)");

  const std::vector<double> outdoor =
      read_weather_csv(cfg.resolve(cfg.paths.weather));
  const ProfilePair pair = detail::stage_profiles(ctx);

  std::vector<const CaseSpec*> selected;
  if (case_selector == "all") {
    for (const CaseSpec& c : cfg.cases) selected.push_back(&c);
  } else {
    std::size_t start = 0;
    for (std::size_t i = 0; i <= case_selector.size(); ++i) {
      if (i == case_selector.size() || case_selector[i] == ',') {
        const std::string name = case_selector.substr(start, i - start);
        require(!name.empty(), ErrorKind::invalid_argument,
                "simulate: empty case name in selector '" + case_selector +
                    "'");
        selected.push_back(&cfg.find_case(name));
        start = i + 1;
      }
    }
  }

  // Build every plant first and fill the g-function cache sequentially so
  // parallel workers never race on files; duplicate layouts share one table.
  const std::size_t n_hours = pair.heating.values_kw.size();
  std::vector<PlantConfig> plants;
  plants.reserve(selected.size());
  for (const CaseSpec* c : selected) {
    PlantConfig pc = cfg.plant_config(*c);
    pc.validate();
    detail::attach_gfunction(pc, ctx.out_dir / "cache", n_hours);
    plants.push_back(std::move(pc));
  }

  std::vector<SimulationResult> results(plants.size());
  std::vector<std::exception_ptr> errors(plants.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= plants.size()) return;
      try {
        results[i] = simulate(plants[i], pair.heating, pair.cooling, outdoor);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n_threads =
      std::min<int>(jobs, static_cast<int>(plants.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);

  std::filesystem::create_directories(ctx.out_dir / "cases");
  std::vector<std::string> outputs;
  std::string summary_csv = "case,kind,boreholes,total_electricity_kwh,status\n";
  Json summary = Json::array();
  for (std::size_t i = 0; i < selected.size(); ++i) {
    const CaseSpec& c = *selected[i];
    const SimulationResult& r = results[i];
    const std::string series_rel = "cases/" + c.name + "_timeseries.csv";
    write_timeseries_csv((ctx.out_dir / series_rel).string(), r);
    outputs.push_back(series_rel);

    const int boreholes = c.kind == SourceKind::ashp_only ? 0 : c.boreholes;
    summary_csv += c.name;
    summary_csv += ',';
    summary_csv += to_string(c.kind);
    summary_csv += ',';
    summary_csv += std::to_string(boreholes);
    summary_csv += ',';
    summary_csv += detail::format_csv(r.total_electricity_kwh);
    summary_csv += ',';
    summary_csv += to_string(r.status);
    summary_csv += '\n';

    summary.push_back(
        {{"case", c.name},
         {"kind", to_string(c.kind)},
         {"boreholes", boreholes},
         {"status", to_string(r.status)},
         {"failure_reason", r.failure_reason},
         {"failure_time_hours", r.failure_time_hours},
         {"total_electricity_kwh", r.total_electricity_kwh},
         {"gshp_electricity_kwh", r.gshp_electricity_kwh},
         {"ashp_electricity_kwh", r.ashp_electricity_kwh},
         {"heater_electricity_kwh", r.heater_electricity_kwh},
         {"pump_electricity_kwh", r.pump_electricity_kwh},
         {"timeseries", series_rel}});
  }
  detail::write_text((ctx.out_dir / "simulation_summary.csv").string(),
                     summary_csv);
  Json summary_doc = {{"config_digest", ctx.digest}, {"cases", summary}};
  detail::write_json_file(ctx.out_dir / "simulation_summary.json",
                          summary_doc);
  outputs.push_back("simulation_summary.csv");
  outputs.push_back("simulation_summary.json");

  detail::record_stage(ctx, "simulate", std::move(outputs));
  return summary_doc;
}

// ---- report -------------------------------------------------------------------

// Consolidate prior stage outputs into one machine-readable report.  Stages
// recorded in the manifest must match the current config digest (stale
// otherwise) and their files must still exist; stages that never ran are
// flagged as missing sections rather than errors.
inline Json run_report(const RunContext& ctx) {
  const RunManifest m = load_manifest(ctx.out_dir);
  static const char* kStages[] = {"scale", "size", "optimize", "simulate"};

  bool any = false;
  for (const char* s : kStages) any = any || m.has(s);
  require(any, ErrorKind::invalid_argument,
          "report: no pipeline outputs in '" + ctx.out_dir.string() +
              "'; run scale, size, optimize or simulate first");

  std::vector<std::string> absent;
  for (const char* s : kStages) {
    if (!m.has(s)) continue;
    const StageRecord& rec = m.stages.at(s);
    require(rec.config_digest == ctx.digest, ErrorKind::stale,
            std::string("report: stage '") + s +
                "' was produced by config digest " + rec.config_digest +
                ", current digest is " + ctx.digest + "; re-run it");
    for (const std::string& rel : rec.outputs)
      if (!std::filesystem::exists(ctx.out_dir / rel))
        absent.push_back(std::string(s) + ": " + rel);
  }
  require(absent.empty(), ErrorKind::invalid_argument, [&] {
    std::string msg = "report: recorded outputs are missing:";
    for (const std::string& a : absent) msg += " [" + a + "]";
    return msg;
  }());

  Json report = {{"artifact_version", m.artifact_version},
                 {"config_digest", ctx.digest},
                 {"sections", Json::object()}};
  auto section = [&](const char* stage, const char* name, auto fill) {
    if (!m.has(stage)) {
      report["sections"][name] = {{"status", "missing"}};
      return;
    }
    Json s = {{"status", "ok"},
              {"outputs", m.stages.at(stage).outputs}};
    fill(s);
    report["sections"][name] = std::move(s);
  };
  section("scale", "loads", [&](Json& s) {
    s["validation"] = detail::read_json_file(ctx.out_dir / "scale_report.json");
    s["profiles_csv"] = "scaled_profiles.csv";
  });
  section("size", "sizing", [&](Json& s) {
    s["result"] = detail::read_json_file(ctx.out_dir / "sizing.json");
  });
  section("optimize", "cost_sweep", [&](Json& s) {
    s["optimum"] = detail::read_json_file(ctx.out_dir / "optimum.json");
    s["sweep_csv"] = "sweep.csv";
  });
  section("simulate", "simulation", [&](Json& s) {
    s["summary"] =
        detail::read_json_file(ctx.out_dir / "simulation_summary.json");
    s["summary_csv"] = "simulation_summary.csv";
  });

  detail::write_json_file(ctx.out_dir / "report.json", report);
  detail::record_stage(ctx, "report", {"report.json"});
  return report;
}

// ---- synthetic fixtures ---------------------------------------------------------

// Deterministic seasonal sinusoid-plus-noise profile pair and matching
// weather series from one seed: winter-peaking heating, summer-peaking
// cooling, diurnal swing, multiplicative noise.  Each mode is reshaped so
// its peak is exact and its annual energy matches to bisection precision.
struct SynthesizedYear {
  LoadProfile heating;
  LoadProfile cooling;
  std::vector<double> outdoor_c;
};

inline SynthesizedYear synthesize_year(std::uint64_t seed,
                                       double heating_annual_kwh,
                                       double heating_peak_kw,
                                       double cooling_annual_kwh,
                                       double cooling_peak_kw) {
  require(heating_annual_kwh > 0.0 && heating_peak_kw > 0.0 &&
              cooling_annual_kwh > 0.0 && cooling_peak_kw > 0.0,
          ErrorKind::invalid_argument,
          "synthesize_year: annual energies and peaks must be > 0");
  require(heating_annual_kwh <= hours_per_year * heating_peak_kw &&
              cooling_annual_kwh <= hours_per_year * cooling_peak_kw,
          ErrorKind::infeasible,
          "synthesize_year: annual energy exceeds 8760 h x peak");

  Rng rng(seed);
  SynthesizedYear out;
  out.heating.mode = LoadMode::heating;
  out.cooling.mode = LoadMode::cooling;
  out.heating.provenance = Provenance::synthetic;
  out.cooling.provenance = Provenance::synthetic;
  out.outdoor_c.reserve(hours_per_year);
  std::vector<double> h(hours_per_year), c(hours_per_year);
  for (std::size_t i = 0; i < hours_per_year; ++i) {
    const double day = static_cast<double>(i) / 24.0;
    const double hod = static_cast<double>(i % 24);
    const double t = 14.0 + 12.0 * std::cos(2.0 * pi * (day - 197.0) / 365.0) +
                     5.0 * std::cos(2.0 * pi * (hod - 15.0) / 24.0) +
                     1.5 * (rng.next_unit() - 0.5);
    out.outdoor_c.push_back(t);
    const double hn = 1.0 + 0.2 * (rng.next_unit() - 0.5);
    const double cn = 1.0 + 0.2 * (rng.next_unit() - 0.5);
    h[i] = std::max(0.0, (17.0 - t) * hn);
    c[i] = std::max(0.0, (t - 23.0) * cn);
  }

  // Exponent sweep: mapping x -> peak (x/peak)^g keeps the peak pinned while
  // g reshapes the annual energy monotonically (s(g) strictly decreases).
  // Bisect g in [g_min, g_max] so the energy lands on target.
  auto calibrate = [](std::vector<double>& v, double annual, double peak) {
    const double max0 = *std::max_element(v.begin(), v.end());
    require(max0 > 0.0, ErrorKind::degenerate,
            "synthesize_year: degenerate seasonal shape");
    for (double& x : v) x *= peak / max0;
    constexpr double g_min = 1e-3, g_max = 8.0;
    auto energy_at = [&](double g) {
      double s = 0.0;
      for (double x : v)
        if (x > 0.0) s += peak * std::pow(x / peak, g);
      return s;
    };
    const double hi_sum = energy_at(g_min);
    const double lo_sum = energy_at(g_max);
    require(annual >= lo_sum && annual <= hi_sum, ErrorKind::infeasible,
            "synthesize_year: annual/peak pair is outside the shape family "
            "(annual " + format_double(annual) + " kWh, reachable [" +
                format_double(lo_sum) + ", " + format_double(hi_sum) + "])");
    double g_lo = g_min, g_hi = g_max;
    for (int it = 0; it < 200; ++it) {
      const double g = 0.5 * (g_lo + g_hi);
      if (energy_at(g) > annual) g_lo = g; else g_hi = g;
    }
    const double g = 0.5 * (g_lo + g_hi);
    for (double& x : v) x = x > 0.0 ? peak * std::pow(x / peak, g) : 0.0;
  };
  calibrate(h, heating_annual_kwh, heating_peak_kw);
  calibrate(c, cooling_annual_kwh, cooling_peak_kw);
  out.heating.values_kw = std::move(h);
  out.cooling.values_kw = std::move(c);
  out.heating.validate("synthesized heating");
  out.cooling.validate("synthesized cooling");
  return out;
}

}  // namespace ghp
