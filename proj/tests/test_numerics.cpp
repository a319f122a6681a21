#include "ghp/numerics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"

namespace {

TEST(ExpIntegral, MatchesQuadratureOracleAcrossDomain) {
  // Grid spans both the series branch (x <= 1) and the continued fraction
  // branch (x > 1), including points straddling the switch.
  const double xs[] = {0.01, 0.02, 0.05, 0.1,  0.25, 0.5, 0.75, 0.9,
                       0.99, 1.0,  1.01, 1.5,  2.0,  3.0, 5.0,  7.5, 10.0};
  for (double x : xs) {
    double got = ghp::exp_integral_e1(x);
    double want = oracle::e1_by_quadrature(x);
    EXPECT_NEAR(got / want, 1.0, 1e-10) << "x = " << x;
  }
}

TEST(ExpIntegral, KnownValueAtOne) {
  EXPECT_NEAR(ghp::exp_integral_e1(1.0), 0.21938393439552027, 1e-12);
}

TEST(ExpIntegral, PositiveAndDecreasing) {
  double prev = ghp::exp_integral_e1(0.005);
  for (double x = 0.01; x < 20.0; x *= 1.35) {
    double v = ghp::exp_integral_e1(x);
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(ExpIntegral, RejectsNonPositiveArguments) {
  EXPECT_THROW(ghp::exp_integral_e1(0.0), ghp::Error);
  EXPECT_THROW(ghp::exp_integral_e1(-1.0), ghp::Error);
  try {
    ghp::exp_integral_e1(-2.5);
    FAIL() << "expected a domain error";
  } catch (const ghp::Error& e) {
    EXPECT_EQ(e.kind(), ghp::ErrorKind::invalid_argument);
  }
}

TEST(Integrate, ElementaryIntegrals) {
  auto s = [](double x) { return std::sin(x); };
  EXPECT_NEAR(ghp::integrate(s, 0.0, 3.14159265358979323846, 1e-12), 2.0,
              1e-11);

  auto inv = [](double x) { return 4.0 / (1.0 + x * x); };
  EXPECT_NEAR(ghp::integrate(inv, 0.0, 1.0, 1e-12),
              3.14159265358979323846, 1e-11);

  EXPECT_DOUBLE_EQ(ghp::integrate(s, 2.0, 2.0), 0.0);
}

TEST(Integrate, HandlesSharpPeak) {
  // Narrow Gaussian inside a wide interval; adaptivity must find it.
  auto g = [](double x) { return std::exp(-1e4 * (x - 0.3) * (x - 0.3)); };
  double want = std::sqrt(3.14159265358979323846 / 1e4);
  EXPECT_NEAR(ghp::integrate(g, -2.0, 2.0, 1e-12) / want, 1.0, 1e-8);
}

TEST(Bisect, FindsThresholdOnMonotoneFunction) {
  auto f = [](double x) { return x * x * x; };
  double x = ghp::bisect_increasing(f, 0.0, 10.0, 27.0, 1e-12);
  EXPECT_NEAR(x, 3.0, 1e-9);
  // Saturation at the bracket ends.
  EXPECT_DOUBLE_EQ(ghp::bisect_increasing(f, 0.0, 2.0, 100.0, 1e-12), 2.0);
  EXPECT_DOUBLE_EQ(ghp::bisect_increasing(f, 1.0, 2.0, 0.0, 1e-12), 1.0);
}

TEST(NelderMead, MinimisesShiftedQuadratic) {
  auto f = [](const std::vector<double>& p) {
    double dx = p[0] - 3.0, dy = p[1] + 2.0;
    return dx * dx + 2.0 * dy * dy + 5.0;
  };
  auto res = ghp::nelder_mead(f, {0.0, 0.0});
  ASSERT_TRUE(res.converged);
  EXPECT_NEAR(res.x[0], 3.0, 1e-6);
  EXPECT_NEAR(res.x[1], -2.0, 1e-6);
  EXPECT_NEAR(res.value, 5.0, 1e-10);
}

TEST(NelderMead, HandlesRosenbrockValley) {
  auto f = [](const std::vector<double>& p) {
    double a = 1.0 - p[0];
    double b = p[1] - p[0] * p[0];
    return a * a + 100.0 * b * b;
  };
  auto res = ghp::nelder_mead(f, {-1.2, 1.0}, 0.5, 2000);
  EXPECT_NEAR(res.x[0], 1.0, 1e-3);
  EXPECT_NEAR(res.x[1], 1.0, 1e-3);
}

std::vector<double> design_matrix_5col(ghp::Rng& rng, std::size_t rows,
                                       std::vector<double>* y,
                                       const std::vector<double>& truth) {
  std::vector<double> a(rows * 5);
  y->assign(rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    double row[5] = {1.0, rng.uniform(0.8, 1.2), rng.uniform(0.8, 1.2),
                     rng.uniform(0.5, 1.5), rng.uniform(0.5, 1.5)};
    for (std::size_t j = 0; j < 5; ++j) {
      a[j * rows + i] = row[j];
      (*y)[i] += truth[j] * row[j];
    }
  }
  return a;
}

TEST(LeastSquares, RecoversExactCoefficients) {
  ghp::Rng rng(1234);
  std::vector<double> truth = {0.3, 0.4, 0.1, 0.1, 0.1};
  std::vector<double> y;
  auto a = design_matrix_5col(rng, 120, &y, truth);
  auto res = ghp::least_squares(a, 120, 5, y,
                                {"bias", "t_load", "t_source", "m_load",
                                 "m_source"});
  ASSERT_EQ(res.rank, 5);
  for (std::size_t j = 0; j < 5; ++j)
    EXPECT_NEAR(res.coefficients[j], truth[j], 1e-11) << "column " << j;
  EXPECT_LT(res.max_abs_residual, 1e-11);
}

TEST(LeastSquares, ReportsCollinearColumnsByName) {
  ghp::Rng rng(99);
  const std::size_t rows = 40;
  std::vector<double> a(rows * 3);
  std::vector<double> y(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    double u = rng.uniform(0.0, 1.0);
    a[0 * rows + i] = 1.0;
    a[1 * rows + i] = u;
    a[2 * rows + i] = 2.0 * u;  // exactly collinear with column 1
    y[i] = 3.0 + u;
  }
  try {
    ghp::least_squares(a, rows, 3, y, {"bias", "ratio", "ratio_doubled"});
    FAIL() << "expected rank-deficiency error";
  } catch (const ghp::Error& e) {
    EXPECT_EQ(e.kind(), ghp::ErrorKind::degenerate);
    std::string msg = e.what();
    // One of the two dependent columns must be named.
    EXPECT_TRUE(msg.find("ratio") != std::string::npos) << msg;
  }
}

TEST(LeastSquares, OverdeterminedNoisySystemKeepsSmallResidual) {
  ghp::Rng rng(7);
  std::vector<double> truth = {-0.8, 3.0, -1.2, 0.1, 0.1};
  std::vector<double> y;
  auto a = design_matrix_5col(rng, 200, &y, truth);
  for (auto& v : y) v += 1e-6 * rng.next_normal();
  auto res = ghp::least_squares(a, 200, 5, y, {});
  for (std::size_t j = 0; j < 5; ++j)
    EXPECT_NEAR(res.coefficients[j], truth[j], 1e-3);
  EXPECT_LT(res.max_abs_residual, 1e-4);
}

TEST(Rng, DeterministicAcrossInstances) {
  ghp::Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  ghp::Rng c(42), d(43);
  EXPECT_NE(c.next_u64(), d.next_u64());
}

TEST(Rng, UnitRangeAndRoughMoments) {
  ghp::Rng rng(2024);
  double s = 0.0;
  for (int i = 0; i < 20000; ++i) {
    double u = rng.next_unit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
  }
  EXPECT_NEAR(s / 20000.0, 0.5, 0.02);
}

}  // namespace
