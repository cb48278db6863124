#pragma once

// High-precision reference values for tests.

#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <limits>
#include <random>

#include "vreach/interval.hpp"

namespace oracle {

using mp = boost::multiprecision::cpp_bin_float_50;

inline mp exact(double x) { return mp(x); }

/// Largest double <= x.
inline double down(const mp& x) {
  double d = static_cast<double>(x);
  if (mp(d) > x) d = std::nextafter(d, -std::numeric_limits<double>::infinity());
  return d;
}

/// Smallest double >= x.
inline double up(const mp& x) {
  double d = static_cast<double>(x);
  if (mp(d) < x) d = std::nextafter(d, std::numeric_limits<double>::infinity());
  return d;
}

inline bool encloses(const vreach::Interval& r, const mp& x) { return mp(r.lo()) <= x && x <= mp(r.hi()); }

inline const mp& pi() {
  static const mp p = boost::math::constants::pi<mp>();
  return p;
}

/// Standard normal CDF.
inline mp Phi(const mp& z) { return boost::math::erfc(-z / boost::multiprecision::sqrt(mp(2))) / 2; }

inline mp normal_pdf(const mp& x, const mp& mu, const mp& sigma) {
  const mp z = (x - mu) / sigma;
  return boost::multiprecision::exp(-z * z / 2) / (sigma * boost::multiprecision::sqrt(2 * pi()));
}

/// Closed-form two-mode thermostat probability, written independently of the
/// library: x0 ~ N(mu, sigma), cooling x0 e^{-t} to 18, heating 30 - 12 e^{-s}
/// to 22, cooling again to 18, ...; goal x in [g_lo, g_hi] while heating at
/// global time t, reached after at most k jumps.
inline mp thermostat(const mp& t, const mp& g_lo, const mp& g_hi, int k, const mp& mu = 30, const mp& sigma = 1) {
  using boost::multiprecision::exp;
  using boost::multiprecision::log;
  const mp h = log(mp(22) / 18) + log(mp(12) / 8);
  mp p = 0;
  for (int j = 1; j <= k; j += 2) {
    const mp base = t - (j - 1) / 2 * h;
    mp t1_lo = base - log(mp(12) / (30 - g_hi));
    const mp t1_hi = base - log(mp(12) / (30 - g_lo));
    if (t1_hi < 0) break;
    if (t1_lo < 0) t1_lo = 0;
    const mp a = 18 * exp(t1_lo), b = 18 * exp(t1_hi);
    p += Phi((b - mu) / sigma) - Phi((a - mu) / sigma);
  }
  return p;
}

/// Random doubles with a wide spread of magnitudes.
class Gen {
 public:
  explicit Gen(unsigned seed) : rng_(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
  double wide(int emin = -20, int emax = 20) {
    const double m = uniform(1, 2);
    const double s = integer(0, 1) ? 1 : -1;
    return s * std::ldexp(m, integer(emin, emax));
  }
  vreach::Interval interval(int emin = -20, int emax = 20) {
    double a = wide(emin, emax), b = wide(emin, emax);
    if (integer(0, 9) == 0) b = a;
    if (integer(0, 9) == 0) a = 0;
    return vreach::Interval(std::min(a, b), std::max(a, b));
  }
  double inside(const vreach::Interval& x) {
    if (x.is_thin()) return x.lo();
    const double v = uniform(x.lo(), x.hi());
    return std::clamp(v, x.lo(), x.hi());
  }
  vreach::Interval sub(const vreach::Interval& x) {
    double a = inside(x), b = inside(x);
    return vreach::Interval(std::min(a, b), std::max(a, b));
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
