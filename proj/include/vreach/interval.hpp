#pragma once

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <optional>
#include <string>

#include "vreach/error.hpp"
#include "vreach/rounding.hpp"

namespace vreach {

/// Closed real interval [lo, hi] with outward-rounded endpoints.
///
/// An Interval is never empty and never holds NaN; set operations that can
/// produce the empty set return std::optional<Interval>. Endpoints may be
/// infinite to denote unbounded sets. All arithmetic rounds the lower
/// endpoint toward -inf and the upper endpoint toward +inf, so every result
/// contains the exact image of its operands.
class Interval {
 public:
  constexpr Interval() = default;
  Interval(double point);  // NOLINT: thin intervals convert implicitly
  Interval(double lo, double hi);

  static Interval entire();
  /// Hull of the closest doubles around a decimal value that is not
  /// representable; thin when the value is exact.
  static Interval around(double nearest, bool exact);

  double lo() const { return lo_; }
  double hi() const { return hi_; }

  bool is_thin() const { return lo_ == hi_; }
  bool is_finite() const { return std::isfinite(lo_) && std::isfinite(hi_); }
  bool contains(double x) const { return lo_ <= x && x <= hi_; }
  bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
  bool contains_zero() const { return lo_ <= 0 && 0 <= hi_; }
  bool intersects(const Interval& o) const { return lo_ <= o.hi_ && o.lo_ <= hi_; }

  /// Magnitude max |x| and mignitude min |x|.
  double mag() const { return std::max(std::fabs(lo_), std::fabs(hi_)); }
  double mig() const;

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, const Interval& x);
std::string to_string(const Interval& x);

// Set operations.
std::optional<Interval> intersect(const Interval& a, const Interval& b);
Interval hull(const Interval& a, const Interval& b);

// Width is rounded up, the midpoint always lies inside the interval.
double width(const Interval& x);
double mid(const Interval& x);
/// Splits at mid(x); both halves share the midpoint.
/// Throws CannotSplit when the midpoint coincides with an endpoint.
std::pair<Interval, Interval> bisect(const Interval& x);

// Arithmetic.
inline Interval operator+(const Interval& a, const Interval& b) {
  return Interval(rounding::add_down(a.lo(), b.lo()), rounding::add_up(a.hi(), b.hi()));
}

inline Interval operator-(const Interval& a, const Interval& b) {
  return Interval(rounding::sub_down(a.lo(), b.hi()), rounding::sub_up(a.hi(), b.lo()));
}

inline Interval operator-(const Interval& a) { return Interval(-a.hi(), -a.lo()); }

Interval operator*(const Interval& a, const Interval& b);
/// Throws DomainError when b contains zero.
Interval operator/(const Interval& a, const Interval& b);

inline Interval& operator+=(Interval& a, const Interval& b) { return a = a + b; }
inline Interval& operator-=(Interval& a, const Interval& b) { return a = a - b; }
inline Interval& operator*=(Interval& a, const Interval& b) { return a = a * b; }
inline Interval& operator/=(Interval& a, const Interval& b) { return a = a / b; }

Interval sqr(const Interval& x);
Interval pow_int(const Interval& x, int n);

// Interval extensions of elementary functions.
Interval exp(const Interval& x);
/// Requires lo >= 0; ln([0, b]) has lower endpoint -inf.
Interval ln(const Interval& x);
Interval sqrt(const Interval& x);
Interval sin(const Interval& x);
Interval cos(const Interval& x);
Interval abs(const Interval& x);

/// Enclosure of pi.
Interval pi();

/// Restricts lo to be nonnegative (densities, masses).
Interval clamp_nonneg(const Interval& x);

}  // namespace vreach
