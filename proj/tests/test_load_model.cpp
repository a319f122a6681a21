#include "ghp/load_model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace {

ghp::LoadProfile make_profile(std::uint64_t seed, ghp::LoadMode mode,
                              double base, double swing) {
  ghp::Rng rng(seed);
  ghp::LoadProfile p;
  p.mode = mode;
  p.provenance = ghp::Provenance::synthetic;
  p.values_kw.resize(ghp::hours_per_year);
  for (int h = 0; h < ghp::hours_per_year; ++h) {
    double season = 0.5 * (1.0 + std::cos(2.0 * 3.14159265358979 *
                                          (h / 24.0 - 15.0) / 365.0));
    p.values_kw[h] =
        std::max(0.0, base + swing * season + 0.05 * base * rng.next_normal());
  }
  return p;
}

// ---- derive_benchmarks --------------------------------------------------------

TEST(DeriveBenchmarks, ConvertsMeteredUnitsToThermalKw) {
  ghp::BuildingRecord rec;
  rec.name = "hall_a";
  rec.type = ghp::BuildingType::office;
  rec.floor_area_m2 = 7000.0;
  rec.annual_steam_kbtu = 4967095.0;
  rec.annual_electricity_kwh = 1.2e6;
  rec.peak_heating_kbtu_h = 1763.0;
  rec.peak_cooling_tons = 200.0;

  ghp::BenchmarkParams params;
  auto bm = ghp::derive_benchmarks({rec}, params);

  EXPECT_NEAR(bm.heating.peak_kw, 1763.0 * 0.293071, 1e-9);
  EXPECT_NEAR(bm.heating.peak_kw, 516.7, 0.05);
  double want_heat_kwh = 4967095.0 * 0.85 * 0.95 * 0.293071;
  EXPECT_NEAR(bm.heating.annual_energy_kwh, want_heat_kwh, 1e-6);
  EXPECT_NEAR(bm.heating.annual_energy_kwh / 1.1755e6, 1.0, 1e-3);
  EXPECT_NEAR(bm.cooling.peak_kw, 200.0 * 3.51685, 1e-9);
  // Whole-building electricity at default attribution 1.0 and the seasonal
  // chiller COP of 3.51685/1.25.
  EXPECT_NEAR(bm.cooling.annual_energy_kwh, 1.2e6 * (3.51685 / 1.25), 1e-6);
  ASSERT_EQ(bm.notes.size(), 1u);  // no submeter -> flagged
  EXPECT_NE(bm.notes[0].find("hall_a"), std::string::npos);
}

TEST(DeriveBenchmarks, PrefersCoolingSubmeterWhenPresent) {
  ghp::BuildingRecord rec;
  rec.name = "lab_1";
  rec.type = ghp::BuildingType::laboratory;
  rec.floor_area_m2 = 1000.0;
  rec.annual_steam_kbtu = 1e5;
  rec.annual_electricity_kwh = 5e5;
  rec.cooling_electricity_kwh = 2e5;
  rec.peak_heating_kbtu_h = 100.0;
  rec.peak_cooling_tons = 50.0;

  ghp::BenchmarkParams params;
  auto bm = ghp::derive_benchmarks({rec}, params);
  EXPECT_NEAR(bm.cooling.annual_energy_kwh, 2e5 * (3.51685 / 1.25), 1e-6);
  EXPECT_TRUE(bm.notes.empty());
}

TEST(DeriveBenchmarks, AdditiveOverRecords) {
  ghp::BuildingRecord a, b;
  a.name = "a";
  a.floor_area_m2 = 1.0;
  a.annual_steam_kbtu = 1000.0;
  a.annual_electricity_kwh = 2000.0;
  a.peak_heating_kbtu_h = 10.0;
  a.peak_cooling_tons = 3.0;
  b = a;
  b.name = "b";
  b.annual_steam_kbtu = 3000.0;
  b.peak_cooling_tons = 7.0;

  ghp::BuildingRecord merged = a;
  merged.annual_steam_kbtu = 4000.0;
  merged.annual_electricity_kwh = 4000.0;
  merged.peak_heating_kbtu_h = 20.0;
  merged.peak_cooling_tons = 10.0;

  ghp::BenchmarkParams params;
  auto split = ghp::derive_benchmarks({a, b}, params);
  auto whole = ghp::derive_benchmarks({merged}, params);
  EXPECT_NEAR(split.heating.annual_energy_kwh, whole.heating.annual_energy_kwh,
              1e-9);
  EXPECT_NEAR(split.heating.peak_kw, whole.heating.peak_kw, 1e-9);
  EXPECT_NEAR(split.cooling.annual_energy_kwh, whole.cooling.annual_energy_kwh,
              1e-9);
  EXPECT_NEAR(split.cooling.peak_kw, whole.cooling.peak_kw, 1e-9);
}

TEST(DeriveBenchmarks, DiversityDeRatesPeaksOnly) {
  ghp::BuildingRecord rec;
  rec.name = "r";
  rec.floor_area_m2 = 1.0;
  rec.annual_steam_kbtu = 1000.0;
  rec.annual_electricity_kwh = 1000.0;
  rec.peak_heating_kbtu_h = 100.0;
  rec.peak_cooling_tons = 10.0;

  ghp::BenchmarkParams params;
  params.peak_diversity = 0.8;
  auto bm = ghp::derive_benchmarks({rec}, params);
  EXPECT_NEAR(bm.heating.peak_kw, 100.0 * 0.293071 * 0.8, 1e-9);
  EXPECT_NEAR(bm.cooling.peak_kw, 10.0 * 3.51685 * 0.8, 1e-9);
  ghp::BenchmarkParams unit;
  auto bm1 = ghp::derive_benchmarks({rec}, unit);
  EXPECT_NEAR(bm.heating.annual_energy_kwh, bm1.heating.annual_energy_kwh,
              1e-12);
}

TEST(DeriveBenchmarks, NamesMissingFields) {
  ghp::BuildingRecord rec;
  rec.name = "empty";
  rec.floor_area_m2 = 100.0;
  rec.annual_electricity_kwh = 1000.0;
  rec.peak_cooling_tons = 5.0;
  try {
    ghp::derive_benchmarks({rec}, ghp::BenchmarkParams{});
    FAIL() << "expected insufficient-data error";
  } catch (const ghp::Error& e) {
    EXPECT_EQ(e.kind(), ghp::ErrorKind::insufficient_data);
    std::string msg = e.what();
    EXPECT_NE(msg.find("annual_steam_kbtu"), std::string::npos) << msg;
    EXPECT_NE(msg.find("peak_heating_kbtu_h"), std::string::npos) << msg;
  }
}

// ---- eq1_objective --------------------------------------------------------------

TEST(Eq1Objective, HandComputedValueOnConstantProfile) {
  ghp::LoadProfile p;
  p.values_kw.assign(ghp::hours_per_year, 1.0);
  ghp::BenchmarkTargets t{17520.0, 2.0};
  // sum = 8760, max = 1 -> ((8760-17520)/17520)^2 + ((1-2)/2)^2 = 0.25+0.25
  EXPECT_DOUBLE_EQ(ghp::eq1_objective(1.0, 0.0, p, t), 0.5);
}

TEST(Eq1Objective, InvariantUnderUniformRescaling) {
  auto p = make_profile(5, ghp::LoadMode::cooling, 40.0, 60.0);
  ghp::BenchmarkTargets t{3.0e5, 180.0};
  const double k = 1.3, b = 2.0, s = 7.0;
  double f0 = ghp::eq1_objective(k, b, p, t);

  ghp::LoadProfile ps = p;
  for (auto& v : ps.values_kw) v *= s;
  ghp::BenchmarkTargets ts{t.annual_energy_kwh * s, t.peak_kw * s};
  double f1 = ghp::eq1_objective(k, b * s, ps, ts);
  EXPECT_NEAR(f0, f1, 1e-12 * (1.0 + std::abs(f0)));
}

TEST(Eq1Objective, RejectsDegenerateTargets) {
  auto p = make_profile(6, ghp::LoadMode::heating, 10.0, 10.0);
  EXPECT_THROW(ghp::eq1_objective(1.0, 0.0, p, {0.0, 5.0}), ghp::Error);
  EXPECT_THROW(ghp::eq1_objective(1.0, 0.0, p, {100.0, 0.0}), ghp::Error);
}

// ---- scale_profile ---------------------------------------------------------------

TEST(ScaleProfile, RecoversExactAffineMap) {
  auto shape = make_profile(11, ghp::LoadMode::heating, 20.0, 80.0);
  const double k_true = 1.7, b_true = 2.0;
  double e = 0.0, p = 0.0;
  for (double v : shape.values_kw) {
    double x = k_true * v + b_true;
    e += x;
    p = std::max(p, x);
  }
  auto scaled = ghp::scale_profile(shape, {e, p});
  EXPECT_NEAR(scaled.solution.gain, k_true, 1e-5);
  EXPECT_NEAR(scaled.solution.offset, b_true, 1e-4);
  EXPECT_LT(scaled.solution.residual, 1e-10);
  EXPECT_EQ(scaled.solution.clamped_hours, 0);
  EXPECT_EQ(scaled.profile.provenance, ghp::Provenance::scaled);
  // Delivered aggregates hit the targets well within 0.1 %.
  EXPECT_NEAR(scaled.profile.annual_kwh() / e, 1.0, 1e-3);
  EXPECT_NEAR(scaled.profile.peak_kw() / p, 1.0, 1e-3);
}

TEST(ScaleProfile, ConstantProfileUsesClosedForm) {
  ghp::LoadProfile p;
  p.values_kw.assign(ghp::hours_per_year, 3.0);
  // Optimal level u solves the two-term quadratic: here u = 2 exactly.
  auto scaled = ghp::scale_profile(p, {17520.0, 2.0});
  EXPECT_NEAR(scaled.solution.gain, 2.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(scaled.solution.offset, 0.0);
  for (double v : scaled.profile.values_kw) ASSERT_NEAR(v, 2.0, 1e-12);
  EXPECT_LT(scaled.solution.residual, 1e-20);
}

TEST(ScaleProfile, ClampsNegativeTailAndReportsResidual) {
  // One low-load hour drops below zero at the unclamped optimum.
  ghp::LoadProfile p;
  p.values_kw.assign(ghp::hours_per_year, 5.0);
  p.values_kw[100] = 1.0;
  p.values_kw[200] = 10.0;
  auto scaled = ghp::scale_profile(p, {5000.0, 100.0});
  EXPECT_EQ(scaled.solution.clamped_hours, 1);
  EXPECT_LT(scaled.solution.offset, 0.0);
  for (double v : scaled.profile.values_kw) ASSERT_GE(v, 0.0);
  // Clamping perturbs the annual sum away from the target, so the residual is
  // small but clearly nonzero.
  EXPECT_GT(scaled.solution.residual, 1e-6);
  EXPECT_LT(scaled.solution.residual, 1e-3);
}

TEST(ScaleProfile, ErrorsAreTyped) {
  ghp::LoadProfile zero;
  zero.values_kw.assign(ghp::hours_per_year, 0.0);
  try {
    ghp::scale_profile(zero, {1000.0, 10.0});
    FAIL() << "expected degenerate error";
  } catch (const ghp::Error& e) {
    EXPECT_EQ(e.kind(), ghp::ErrorKind::degenerate);
  }

  auto p = make_profile(3, ghp::LoadMode::cooling, 10.0, 30.0);
  try {
    // Energy target beyond 8760 x peak cannot be met by any profile.
    ghp::scale_profile(p, {1e6, 10.0});
    FAIL() << "expected infeasible error";
  } catch (const ghp::Error& e) {
    EXPECT_EQ(e.kind(), ghp::ErrorKind::infeasible);
  }
}

TEST(ScaleProfile, ScaledValuesNeverNegativeAcrossSeeds) {
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
    auto p = make_profile(seed, ghp::LoadMode::heating, 5.0, 60.0);
    auto scaled = ghp::scale_profile(p, {2.0e5, 90.0});
    for (double v : scaled.profile.values_kw) ASSERT_GE(v, 0.0);
  }
}

// ---- combine_heating / nominal_flow ----------------------------------------------

TEST(CombineHeating, ElementwiseSumAndProvenance) {
  auto a = make_profile(21, ghp::LoadMode::heating, 10.0, 40.0);
  auto b = make_profile(22, ghp::LoadMode::heating, 2.0, 5.0);
  auto c = ghp::combine_heating(a, b);
  for (int h = 0; h < ghp::hours_per_year; h += 997)
    EXPECT_DOUBLE_EQ(c.values_kw[h], a.values_kw[h] + b.values_kw[h]);
  EXPECT_EQ(c.provenance, ghp::Provenance::synthetic);

  auto ab = ghp::combine_heating(a, b);
  auto ba = ghp::combine_heating(b, a);
  for (int h = 0; h < ghp::hours_per_year; ++h)
    ASSERT_DOUBLE_EQ(ab.values_kw[h], ba.values_kw[h]);
}

TEST(CombineHeating, RejectsModeAndLengthMismatch) {
  auto heat = make_profile(31, ghp::LoadMode::heating, 10.0, 40.0);
  auto cool = make_profile(32, ghp::LoadMode::cooling, 10.0, 40.0);
  EXPECT_THROW(ghp::combine_heating(heat, cool), ghp::Error);

  ghp::LoadProfile shorter = heat;
  shorter.values_kw.resize(8759);
  EXPECT_THROW(ghp::combine_heating(heat, shorter), ghp::Error);
}

TEST(NominalFlow, FiveKelvinDesignRule) {
  ghp::LoadProfile p;
  p.values_kw.assign(ghp::hours_per_year, 20.93);
  // 20.93 kW / (4186 J/kgK * 5 K) = 1 kg/s
  EXPECT_NEAR(ghp::nominal_flow(p), 1.0, 1e-12);

  ghp::LoadProfile zero;
  zero.values_kw.assign(ghp::hours_per_year, 0.0);
  EXPECT_THROW(ghp::nominal_flow(zero), ghp::Error);
}

}  // namespace
