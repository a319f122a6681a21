// Numerical kernels: exponential integral, adaptive quadrature, Nelder-Mead,
// pivoted least squares and bisection.  Everything here is deterministic and
// allocation-light; the heavy loops sit in hot paths of the response models.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "ghp/common.hpp"

namespace ghp {

constexpr double euler_gamma = 0.57721566490153286060651209;

// ---- exponential integral E1 -------------------------------------------------
//
// E1(x) = \int_x^inf exp(-u)/u du, x > 0.
// Power series for x <= 1, modified Lentz continued fraction for x > 1.
// Relative error is ~1e-15 over the whole domain, comfortably below the
// 1e-10 target used by the resistance formulas.
inline double exp_integral_e1(double x) {
  require(std::isfinite(x) && x > 0.0, ErrorKind::invalid_argument,
          "exp_integral_e1: argument must be finite and > 0, got " +
              format_double(x));

  if (x <= 1.0) {
    // E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k * k!)
    double sum = 0.0;
    double term = 1.0;  // x^k / k!
    for (int k = 1; k <= 60; ++k) {
      term *= x / k;
      double contrib = term / k;
      sum += (k % 2 == 1) ? contrib : -contrib;
      if (contrib < 1e-18 * (std::abs(sum) + 1e-300)) break;
    }
    return -euler_gamma - std::log(x) + sum;
  }

  // Continued fraction: E1(x) = exp(-x) * 1/(x+1- 1/(x+3- 4/(x+5- ...)))
  constexpr double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 200; ++i) {
    double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x);
}

// ---- adaptive Gauss-Kronrod quadrature ---------------------------------------
//
// 7-point Gauss / 15-point Kronrod pair with recursive bisection.  Used by the
// finite line source integral; tolerances are treated as mixed abs/rel.

namespace detail {

// nodes/weights for [-1, 1]
constexpr std::array<double, 8> gk_nodes = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993945,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
};
constexpr std::array<double, 8> gk_weights_k = {
    0.2094821410847278, 0.2044329400752989, 0.1903505780647854,
    0.1690047266392679, 0.1406532597155259, 0.1047900103222502,
    0.0630920926299786, 0.0229353220105292,
};
constexpr std::array<double, 4> gk_weights_g = {
    0.4179591836734694,
    0.3818300505051189,
    0.2797053914892767,
    0.1294849661688697,
};

template <typename F>
inline void gk15(const F& f, double a, double b, double& result,
                 double& err_est) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);

  double fc = f(c);
  double res_g = gk_weights_g[0] * fc;
  double res_k = gk_weights_k[0] * fc;
  for (int i = 1; i < 8; ++i) {
    double x = h * gk_nodes[i];
    double fsum = f(c - x) + f(c + x);
    res_k += gk_weights_k[i] * fsum;
    if (i % 2 == 0) res_g += gk_weights_g[i / 2] * fsum;
  }
  result = res_k * h;
  err_est = std::abs((res_k - res_g) * h);
}

template <typename F>
inline double integrate_recursive(const F& f, double a, double b, double tol,
                                  int depth, int& evals_left) {
  double result, err;
  gk15(f, a, b, result, err);
  evals_left -= 15;
  if (err <= tol || depth >= 30 || evals_left <= 0) return result;
  double m = 0.5 * (a + b);
  return integrate_recursive(f, a, m, 0.5 * tol, depth + 1, evals_left) +
         integrate_recursive(f, m, b, 0.5 * tol, depth + 1, evals_left);
}

}  // namespace detail

// Integrate f over [a, b].  tol is a mixed absolute/relative target.  The
// interval is pre-split into panels so narrow features cannot hide between
// the sample points of a single top-level rule application.
template <typename F>
inline double integrate(const F& f, double a, double b, double tol = 1e-10,
                        int initial_panels = 16) {
  require(std::isfinite(a) && std::isfinite(b), ErrorKind::invalid_argument,
          "integrate: bounds must be finite");
  if (a == b) return 0.0;
  int evals_left = 2'000'000;
  double total = 0.0;
  double w = (b - a) / initial_panels;
  for (int p = 0; p < initial_panels; ++p) {
    double lo = a + p * w;
    double hi = (p + 1 == initial_panels) ? b : lo + w;
    total += detail::integrate_recursive(f, lo, hi, tol / initial_panels, 0,
                                         evals_left);
  }
  return total;
}

// ---- bisection ----------------------------------------------------------------

// Find x in [lo, hi] with f(x) ~ target, assuming f is monotone nondecreasing.
template <typename F>
inline double bisect_increasing(const F& f, double lo, double hi, double target,
                                double x_tol, int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (target <= flo) return lo;
  if (target >= fhi) return hi;
  for (int i = 0; i < max_iter && (hi - lo) > x_tol; ++i) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// ---- Nelder-Mead ----------------------------------------------------------------

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Standard downhill simplex with adaptive restart.  Small dimension only.
inline NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, double scale = 0.5, int max_iter = 500,
    double f_tol = 1e-14) {
  const std::size_t n = x0.size();
  require(n >= 1, ErrorKind::invalid_argument, "nelder_mead: empty start point");

  std::vector<std::vector<double>> pts(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i)
    pts[i + 1][i] += (x0[i] != 0.0 ? 0.25 * std::abs(x0[i]) + scale : scale);

  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);

  NelderMeadResult out;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    // order ascending by value
    std::vector<std::size_t> idx(n + 1);
    for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    {
      std::vector<std::vector<double>> p2(n + 1);
      std::vector<double> v2(n + 1);
      for (std::size_t i = 0; i <= n; ++i) {
        p2[i] = pts[idx[i]];
        v2[i] = vals[idx[i]];
      }
      pts.swap(p2);
      vals.swap(v2);
    }

    if (std::abs(vals[n] - vals[0]) <=
        f_tol * (std::abs(vals[0]) + std::abs(vals[n]) + 1e-300)) {
      out.converged = true;
      break;
    }

    // centroid of all but worst
    std::vector<double> cen(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) cen[j] += pts[i][j] / n;

    auto blend = [&](double t) {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j)
        p[j] = cen[j] + t * (pts[n][j] - cen[j]);
      return p;
    };

    std::vector<double> refl = blend(-1.0);
    double f_refl = f(refl);
    if (f_refl < vals[0]) {
      std::vector<double> expd = blend(-2.0);
      double f_expd = f(expd);
      if (f_expd < f_refl) {
        pts[n] = expd;
        vals[n] = f_expd;
      } else {
        pts[n] = refl;
        vals[n] = f_refl;
      }
    } else if (f_refl < vals[n - 1]) {
      pts[n] = refl;
      vals[n] = f_refl;
    } else {
      std::vector<double> ctr = blend(f_refl < vals[n] ? -0.5 : 0.5);
      double f_ctr = f(ctr);
      if (f_ctr < std::min(f_refl, vals[n])) {
        pts[n] = ctr;
        vals[n] = f_ctr;
      } else {
        // shrink toward best
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t j = 0; j < n; ++j)
            pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
          vals[i] = f(pts[i]);
        }
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (vals[i] < vals[best]) best = i;
  out.x = pts[best];
  out.value = vals[best];
  out.iterations = iter;
  return out;
}

// ---- least squares via column-pivoted Householder QR ----------------------------

struct LeastSquaresResult {
  std::vector<double> coefficients;
  double max_abs_residual = 0.0;
  int rank = 0;
};

// Solve min ||A x - y||_2 for a dense column-major A (rows x cols).
// column_names is used to report rank deficiency in a actionable way.
inline LeastSquaresResult least_squares(
    std::vector<double> a, std::size_t rows, std::size_t cols,
    std::vector<double> y, const std::vector<std::string>& column_names) {
  require(rows >= cols && cols >= 1, ErrorKind::invalid_argument,
          "least_squares: need at least as many rows as columns");
  require(a.size() == rows * cols && y.size() == rows,
          ErrorKind::invalid_argument, "least_squares: shape mismatch");

  const std::vector<double> a_orig = a;
  const std::vector<double> y_orig = y;

  auto col = [&](std::size_t j) { return a.data() + j * rows; };
  std::vector<std::size_t> perm(cols);
  for (std::size_t j = 0; j < cols; ++j) perm[j] = j;

  std::vector<double> r_diag(cols, 0.0);
  for (std::size_t k = 0; k < cols; ++k) {
    // pivot: bring the column with the largest remaining norm to position k
    std::size_t p = k;
    double best = -1.0;
    for (std::size_t j = k; j < cols; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < rows; ++i) s += col(j)[i] * col(j)[i];
      if (s > best) {
        best = s;
        p = j;
      }
    }
    if (p != k) {
      for (std::size_t i = 0; i < rows; ++i) std::swap(col(p)[i], col(k)[i]);
      std::swap(perm[p], perm[k]);
    }

    // Householder reflector for column k
    double norm = std::sqrt(best);
    if (col(k)[k] > 0) norm = -norm;
    r_diag[k] = norm;
    if (norm == 0.0) continue;

    for (std::size_t i = k; i < rows; ++i) col(k)[i] /= -norm;
    col(k)[k] += 1.0;

    for (std::size_t j = k + 1; j < cols; ++j) {
      double dot = 0.0;
      for (std::size_t i = k; i < rows; ++i) dot += col(k)[i] * col(j)[i];
      dot /= col(k)[k];
      for (std::size_t i = k; i < rows; ++i) col(j)[i] -= dot * col(k)[i];
    }
    double dot = 0.0;
    for (std::size_t i = k; i < rows; ++i) dot += col(k)[i] * y[i];
    dot /= col(k)[k];
    for (std::size_t i = k; i < rows; ++i) y[i] -= dot * col(k)[i];
  }

  // rank detection on |R_kk|
  double max_diag = 0.0;
  for (std::size_t k = 0; k < cols; ++k)
    max_diag = std::max(max_diag, std::abs(r_diag[k]));
  int rank = 0;
  const double tol = 1e-10 * (max_diag > 0 ? max_diag : 1.0);
  for (std::size_t k = 0; k < cols; ++k)
    if (std::abs(r_diag[k]) > tol) ++rank;

  if (rank < static_cast<int>(cols)) {
    std::string bad;
    for (std::size_t k = 0; k < cols; ++k) {
      if (std::abs(r_diag[k]) <= tol) {
        if (!bad.empty()) bad += ", ";
        bad += (perm[k] < column_names.size()) ? column_names[perm[k]]
                                               : std::to_string(perm[k]);
      }
    }
    fail(ErrorKind::degenerate,
         "least_squares: design matrix is rank deficient (rank " +
             std::to_string(rank) + " of " + std::to_string(cols) +
             "); collinear columns: " + bad);
  }

  // back substitution: R z = Q^T y (leading cols entries of transformed y)
  std::vector<double> z(cols, 0.0);
  for (std::size_t kk = cols; kk-- > 0;) {
    double s = y[kk];
    for (std::size_t j = kk + 1; j < cols; ++j) {
      // R(kk, j) is stored above the reflector in column j
      s -= a[j * rows + kk] * z[j];
    }
    z[kk] = s / r_diag[kk];
  }

  LeastSquaresResult out;
  out.rank = rank;
  out.coefficients.assign(cols, 0.0);
  for (std::size_t k = 0; k < cols; ++k) out.coefficients[perm[k]] = z[k];

  for (std::size_t i = 0; i < rows; ++i) {
    double pred = 0.0;
    for (std::size_t j = 0; j < cols; ++j)
      pred += a_orig[j * rows + i] * out.coefficients[j];
    out.max_abs_residual =
        std::max(out.max_abs_residual, std::abs(pred - y_orig[i]));
  }
  return out;
}

}  // namespace ghp
