// ghpkit: command-line front end for the design-and-simulation pipeline.
//
// Subcommands: scale, size, optimize, simulate, report, synth-profile.
// Exit codes: 0 success, 2 input/config error, 3 infeasible optimization,
// 4 stale manifest.  Errors are emitted to stderr as one JSON record;
// stage summaries go to stdout as pretty-printed JSON.
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ghp/pipeline.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kInfeasible = 3;
constexpr int kStale = 4;

int exit_code_for(ghp::ErrorKind kind) {
  switch (kind) {
    case ghp::ErrorKind::infeasible:
      return kInfeasible;
    case ghp::ErrorKind::stale:
      return kStale;
    default:
      return kInputError;
  }
}

void print_record(const ghp::Json& j) {
  std::printf("%s\n", j.dump(2).c_str());
}

void print_error(const char* kind, const std::string& message) {
  const ghp::Json rec = {{"error", kind}, {"message", message}};
  std::fprintf(stderr, "%s\n", rec.dump().c_str());
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ghp::Error& e) {
    print_error(ghp::to_string(e.kind()), e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return kInputError;
  }
}

struct StageArgs {
  std::string config;
  bool dry_run = false;
  std::vector<std::string> sets;
};

void add_stage_flags(CLI::App* cmd, StageArgs& args) {
  cmd->add_option("--config", args.config, "Project config JSON file")
      ->required();
  cmd->add_flag("--dry-run", args.dry_run,
                "Validate the config and write nothing");
  cmd->add_option("--set", args.sets,
                  "Override a config key (key.path=value); repeatable");
}

// Validates the config, prints the digest, writes nothing.
int dry_run_only(const StageArgs& args) {
  const ghp::RunContext ctx = ghp::make_context(args.config, args.sets);
  print_record({{"status", "ok"},
                {"dry_run", true},
                {"config_digest", ctx.digest},
                {"output_dir", ctx.out_dir.string()}});
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ghpkit: hybrid ground-source district energy toolkit"};
  app.require_subcommand(1);

  StageArgs scale_args, size_args, optimize_args, report_args;
  StageArgs simulate_args;
  std::string cases = "all";
  int jobs = 1;

  CLI::App* scale = app.add_subcommand(
      "scale", "Calibrate donor profiles to benchmark targets");
  add_stage_flags(scale, scale_args);

  CLI::App* size = app.add_subcommand(
      "size", "Size a full ground-source borefield for the current profiles");
  add_stage_flags(size, size_args);

  CLI::App* optimize = app.add_subcommand(
      "optimize", "Sweep hybrid splits and report the cheapest design");
  add_stage_flags(optimize, optimize_args);

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Run the configured case matrix through a simulated year");
  add_stage_flags(simulate, simulate_args);
  simulate->add_option("--cases", cases,
                       "Comma-separated case names, or 'all'");
  simulate->add_option("--jobs", jobs, "Concurrently simulated cases")
      ->check(CLI::PositiveNumber);

  CLI::App* report = app.add_subcommand(
      "report", "Consolidate stage outputs into one report");
  add_stage_flags(report, report_args);

  std::uint64_t seed = 1;
  bool seed_given = false;
  std::string synth_config, synth_out, synth_weather_out;
  double h_annual = 150000.0, h_peak = 70.0;
  double c_annual = 40000.0, c_peak = 45.0;
  CLI::App* synth = app.add_subcommand(
      "synth-profile",
      "Generate a deterministic sinusoid-plus-noise profile pair");
  synth->add_option("--out", synth_out, "Profile pair CSV to write")
      ->required();
  synth->add_option("--weather-out", synth_weather_out,
                    "Also write the matching weather CSV here");
  CLI::Option* seed_opt =
      synth->add_option("--seed", seed, "Generator seed (default 1)");
  synth->add_option("--config", synth_config,
                    "Take the seed from this project config instead");
  synth->add_option("--heating-annual-kwh", h_annual, "Heating annual energy");
  synth->add_option("--heating-peak-kw", h_peak, "Heating peak load");
  synth->add_option("--cooling-annual-kwh", c_annual, "Cooling annual energy");
  synth->add_option("--cooling-peak-kw", c_peak, "Cooling peak load");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return kInputError;
  }
  seed_given = seed_opt->count() > 0;

  if (scale->parsed()) {
    return guarded([&] {
      if (scale_args.dry_run) return dry_run_only(scale_args);
      const ghp::RunContext ctx =
          ghp::make_context(scale_args.config, scale_args.sets);
      print_record(ghp::run_scale(ctx));
      return kOk;
    });
  }
  if (size->parsed()) {
    return guarded([&] {
      if (size_args.dry_run) return dry_run_only(size_args);
      const ghp::RunContext ctx =
          ghp::make_context(size_args.config, size_args.sets);
      print_record(ghp::run_size(ctx));
      return kOk;
    });
  }
  if (optimize->parsed()) {
    return guarded([&] {
      if (optimize_args.dry_run) return dry_run_only(optimize_args);
      const ghp::RunContext ctx =
          ghp::make_context(optimize_args.config, optimize_args.sets);
      print_record(ghp::run_optimize(ctx));
      return kOk;
    });
  }
  if (simulate->parsed()) {
    return guarded([&] {
      if (simulate_args.dry_run) return dry_run_only(simulate_args);
      const ghp::RunContext ctx =
          ghp::make_context(simulate_args.config, simulate_args.sets);
      print_record(ghp::run_simulate(ctx, cases, jobs));
      return kOk;
    });
  }
  if (report->parsed()) {
    return guarded([&] {
      if (report_args.dry_run) return dry_run_only(report_args);
      const ghp::RunContext ctx =
          ghp::make_context(report_args.config, report_args.sets);
      print_record(ghp::run_report(ctx));
      return kOk;
    });
  }
  if (synth->parsed()) {
    return guarded([&] {
      std::uint64_t use_seed = seed;
      if (!synth_config.empty() && !seed_given)
        use_seed = ghp::load_project_config(synth_config).seed;
      const ghp::SynthesizedYear year =
          ghp::synthesize_year(use_seed, h_annual, h_peak, c_annual, c_peak);
      ghp::write_profile_csv(synth_out, year.heating, year.cooling);
      if (!synth_weather_out.empty())
        ghp::write_weather_csv(synth_weather_out, year.outdoor_c);
      ghp::Json rec = {{"status", "ok"},
                       {"seed", use_seed},
                       {"profiles", synth_out}};
      if (!synth_weather_out.empty()) rec["weather"] = synth_weather_out;
      print_record(rec);
      return kOk;
    });
  }
  print_error("usage", "no subcommand given");
  return kInputError;
}
