// Shared constants, error types and small utilities used across the toolkit.
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ghp {

// ---- physical constants and unit conversions -------------------------------

constexpr int hours_per_year = 8760;
constexpr double seconds_per_hour = 3600.0;
constexpr double seconds_per_day = 86400.0;

constexpr double kw_per_kbtu_h = 0.293071;  // 1 kBtu/h in kW
constexpr double kw_per_ton = 3.51685;      // 1 refrigeration ton in kW

constexpr double cp_water = 4186.0;    // J/(kg K)
constexpr double rho_water = 1000.0;   // kg/m^3
constexpr double cp_air = 1005.0;      // J/(kg K)
constexpr double rho_air = 1.204;      // kg/m^3 at ~20 C

constexpr double celsius_to_kelvin = 273.15;

inline double kbtu_h_to_kw(double v) { return v * kw_per_kbtu_h; }
inline double tons_to_kw(double v) { return v * kw_per_ton; }

// ---- error model ------------------------------------------------------------
//
// All operations report failures through typed exceptions.  The kind maps to a
// process exit code at the CLI boundary; the message names the offending field
// or quantity so callers can act on it.

enum class ErrorKind {
  invalid_argument,   // structural/validation problem in inputs
  insufficient_data,  // required fields absent from every record
  degenerate,         // mathematically degenerate problem (zero target, ...)
  infeasible,         // physically/economically infeasible design point
  numeric,            // iteration failed to converge
  io,                 // file missing/unreadable/malformed
  stale,              // artifact digest does not match current config
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::insufficient_data: return "insufficient_data";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::io: return "io";
    default: return "stale";
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool ok, ErrorKind kind, const std::string& message) {
  if (!ok) fail(kind, message);
}

// ---- deterministic hashing ---------------------------------------------------

// FNV-1a, 64 bit.  Used to fingerprint configs and cached tables.
struct Fnv1a {
  std::uint64_t state = 1469598103934665603ull;

  void feed(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      state ^= p[i];
      state *= 1099511628211ull;
    }
  }
  void feed(std::string_view s) { feed(s.data(), s.size()); }
  void feed(double v) { feed(&v, sizeof v); }
  void feed(std::uint64_t v) { feed(&v, sizeof v); }
  std::uint64_t digest() const { return state; }
};

inline std::string hex_digest(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// ---- deterministic random numbers -------------------------------------------
//
// splitmix64: tiny, seedable, identical on every platform.  Standard library
// distributions are deliberately avoided because their output is
// implementation-defined; the transforms below are pinned.

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  // standard normal via Box-Muller (always consumes two uniforms)
  double next_normal() {
    double u1 = next_unit();
    double u2 = next_unit();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::uint64_t state_;
};

// ---- misc helpers -----------------------------------------------------------

inline std::string format_double(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

inline double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

inline double max_value(const std::vector<double>& v) {
  double m = v.empty() ? 0.0 : v.front();
  for (double x : v)
    if (x > m) m = x;
  return m;
}

}  // namespace ghp
