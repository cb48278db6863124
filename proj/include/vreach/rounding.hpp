#pragma once

// One-sided rounding of the basic operations.
//
// Every primitive computes the round-to-nearest result and then uses an
// error-free transformation (TwoSum, or an FMA residual) to find out on which
// side of the exact value it landed. The returned bound is therefore the
// correctly rounded result in the requested direction, and no FPU mode is
// ever changed. Near the underflow threshold the residual is no longer exact;
// there we fall back to stepping one ulp outward.

#include <cmath>
#include <limits>

namespace vreach::rounding {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kMax = std::numeric_limits<double>::max();
// Below this magnitude FMA residuals of products/quotients may be inexact.
inline constexpr double kTiny = 0x1p-960;

inline double next_up(double x) { return std::nextafter(x, kInf); }
inline double next_down(double x) { return std::nextafter(x, -kInf); }

inline double add_down(double a, double b) {
  const double s = a + b;
  if (!std::isfinite(s)) {
    if (std::isinf(a) || std::isinf(b)) return s;
    return s > 0 ? kMax : s;  // overflow
  }
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return err < 0 ? next_down(s) : s;
}

inline double add_up(double a, double b) {
  const double s = a + b;
  if (!std::isfinite(s)) {
    if (std::isinf(a) || std::isinf(b)) return s;
    return s < 0 ? -kMax : s;
  }
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return err > 0 ? next_up(s) : s;
}

inline double sub_down(double a, double b) { return add_down(a, -b); }
inline double sub_up(double a, double b) { return add_up(a, -b); }

// Products with a zero factor are zero, also against an infinite factor:
// interval endpoints at infinity stand for unbounded sets, not for values.
inline double mul_down(double a, double b) {
  if (a == 0 || b == 0) return 0.0;
  const double p = a * b;
  if (std::isinf(a) || std::isinf(b)) return p;
  if (std::isinf(p)) return p > 0 ? kMax : p;
  if (std::fabs(p) < kTiny) return next_down(p);
  const double e = std::fma(a, b, -p);
  return e < 0 ? next_down(p) : p;
}

inline double mul_up(double a, double b) {
  if (a == 0 || b == 0) return 0.0;
  const double p = a * b;
  if (std::isinf(a) || std::isinf(b)) return p;
  if (std::isinf(p)) return p < 0 ? -kMax : p;
  if (std::fabs(p) < kTiny) return next_up(p);
  const double e = std::fma(a, b, -p);
  return e > 0 ? next_up(p) : p;
}

// b must be nonzero.
inline double div_down(double a, double b) {
  if (a == 0) return 0.0;
  const double q = a / b;
  if (std::isinf(a)) return q;
  if (std::isinf(b)) return 0.0;
  if (std::isinf(q)) return q > 0 ? kMax : q;
  if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return next_down(q);
  // exact remainder: a - q*b; sign of (a/b - q) = sign(r) * sign(b)
  const double r = std::fma(-q, b, a);
  const bool below = (r < 0) != (b < 0);  // true value below q
  return (r != 0 && below) ? next_down(q) : q;
}

inline double div_up(double a, double b) {
  if (a == 0) return 0.0;
  const double q = a / b;
  if (std::isinf(a)) return q;
  if (std::isinf(b)) return 0.0;
  if (std::isinf(q)) return q < 0 ? -kMax : q;
  if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return next_up(q);
  const double r = std::fma(-q, b, a);
  const bool above = (r > 0) == (b > 0);
  return (r != 0 && above) ? next_up(q) : q;
}

// a >= 0
inline double sqrt_down(double a) {
  const double s = std::sqrt(a);
  if (s == 0 || std::isinf(s)) return s;
  if (a < kTiny) return next_down(s);
  const double r = std::fma(-s, s, a);
  return r < 0 ? next_down(s) : s;
}

inline double sqrt_up(double a) {
  const double s = std::sqrt(a);
  if (s == 0 || std::isinf(s)) return s;
  if (a < kTiny) return next_up(s);
  const double r = std::fma(-s, s, a);
  return r > 0 ? next_up(s) : s;
}

// Endpoint images of library transcendentals are trusted to 1 ulp; pad by 2.
inline double pad_down(double x) {
  if (std::isinf(x)) return x;
  return next_down(next_down(x));
}

inline double pad_up(double x) {
  if (std::isinf(x)) return x;
  return next_up(next_up(x));
}

}  // namespace vreach::rounding
