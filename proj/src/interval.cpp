#include "vreach/interval.hpp"

#include <cstdio>
#include <ostream>

namespace vreach {

using namespace rounding;

Interval::Interval(double point) : lo_(point), hi_(point) {
  if (std::isnan(point)) throw DomainError("interval endpoint is NaN");
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (std::isnan(lo) || std::isnan(hi)) throw DomainError("interval endpoint is NaN");
  if (lo > hi) throw DomainError("interval with lo > hi");
  if (lo_ == 0) lo_ = 0.0;  // drop negative zero
  if (hi_ == 0) hi_ = 0.0;
}

Interval Interval::entire() { return Interval(-kInf, kInf); }

Interval Interval::around(double nearest, bool exact) {
  if (exact) return Interval(nearest);
  return Interval(next_down(nearest), next_up(nearest));
}

double Interval::mig() const {
  if (contains_zero()) return 0.0;
  return std::min(std::fabs(lo_), std::fabs(hi_));
}

std::string to_string(const Interval& x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "[%.17g, %.17g]", x.lo(), x.hi());
  return buf;
}

std::ostream& operator<<(std::ostream& os, const Interval& x) { return os << to_string(x); }

std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  const double lo = std::max(a.lo(), b.lo());
  const double hi = std::min(a.hi(), b.hi());
  if (lo > hi) return std::nullopt;
  return Interval(lo, hi);
}

Interval hull(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

double width(const Interval& x) { return sub_up(x.hi(), x.lo()); }

double mid(const Interval& x) {
  if (!x.is_finite()) throw DomainError("midpoint of unbounded interval " + to_string(x));
  if (x.is_thin()) return x.lo();
  double m = 0.5 * x.lo() + 0.5 * x.hi();
  if (m < x.lo()) m = x.lo();
  if (m > x.hi()) m = x.hi();
  return m;
}

std::pair<Interval, Interval> bisect(const Interval& x) {
  const double m = mid(x);
  if (m <= x.lo() || m >= x.hi()) throw CannotSplit("cannot bisect " + to_string(x));
  return {Interval(x.lo(), m), Interval(m, x.hi())};
}

Interval operator*(const Interval& a, const Interval& b) {
  const double al = a.lo(), ah = a.hi(), bl = b.lo(), bh = b.hi();
  if (al >= 0 && bl >= 0) return Interval(mul_down(al, bl), mul_up(ah, bh));
  const double lo =
      std::min(std::min(mul_down(al, bl), mul_down(al, bh)), std::min(mul_down(ah, bl), mul_down(ah, bh)));
  const double hi =
      std::max(std::max(mul_up(al, bl), mul_up(al, bh)), std::max(mul_up(ah, bl), mul_up(ah, bh)));
  return Interval(lo, hi);
}

namespace {

Interval reciprocal(const Interval& b) {
  return Interval(div_down(1.0, b.hi()), div_up(1.0, b.lo()));
}

}  // namespace

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw DomainError("division by " + to_string(b));
  if (!a.is_finite() || !b.is_finite()) return a * reciprocal(b);
  const double al = a.lo(), ah = a.hi(), bl = b.lo(), bh = b.hi();
  const double lo =
      std::min(std::min(div_down(al, bl), div_down(al, bh)), std::min(div_down(ah, bl), div_down(ah, bh)));
  const double hi =
      std::max(std::max(div_up(al, bl), div_up(al, bh)), std::max(div_up(ah, bl), div_up(ah, bh)));
  return Interval(lo, hi);
}

namespace {

// a >= 0, n >= 1
double pow_down(double a, int n) {
  double r = a;
  for (int i = 1; i < n; ++i) r = mul_down(r, a);
  return r;
}

double pow_up(double a, int n) {
  double r = a;
  for (int i = 1; i < n; ++i) r = mul_up(r, a);
  return r;
}

}  // namespace

Interval sqr(const Interval& x) { return pow_int(x, 2); }

Interval pow_int(const Interval& x, int n) {
  if (n == 0) return Interval(1.0);
  if (n < 0) return Interval(1.0) / pow_int(x, -n);
  if (n == 1) return x;
  if (n % 2 == 0) return Interval(pow_down(x.mig(), n), pow_up(x.mag(), n));
  const double lo = x.lo() >= 0 ? pow_down(x.lo(), n) : -pow_up(-x.lo(), n);
  const double hi = x.hi() >= 0 ? pow_up(x.hi(), n) : -pow_down(-x.hi(), n);
  return Interval(lo, hi);
}

Interval exp(const Interval& x) {
  auto down = [](double v) {
    if (v == 0) return 1.0;
    if (v == -kInf) return 0.0;
    return std::max(0.0, pad_down(std::exp(v)));
  };
  auto up = [](double v) {
    if (v == 0) return 1.0;
    if (v == -kInf) return 0.0;
    return pad_up(std::exp(v));
  };
  double lo = down(x.lo());
  if (std::isinf(lo)) lo = kMax;
  return Interval(lo, up(x.hi()));
}

Interval ln(const Interval& x) {
  if (x.lo() < 0) throw DomainError("ln of " + to_string(x));
  auto down = [](double v) { return v == 1 ? 0.0 : pad_down(std::log(v)); };
  auto up = [](double v) {
    if (v == 1) return 0.0;
    if (v == 0) return -kMax;
    return pad_up(std::log(v));
  };
  return Interval(down(x.lo()), up(x.hi()));
}

Interval sqrt(const Interval& x) {
  if (x.lo() < 0) throw DomainError("sqrt of " + to_string(x));
  return Interval(sqrt_down(x.lo()), sqrt_up(x.hi()));
}

Interval abs(const Interval& x) {
  if (x.lo() >= 0) return x;
  if (x.hi() <= 0) return -x;
  return Interval(0.0, x.mag());
}

Interval pi() {
  static const Interval p(3.141592653589793, next_up(3.141592653589793));
  return p;
}

namespace {

constexpr double kTrigHuge = 0x1p40;

// True when some value c + 2k (k integer) lies in t.
bool hits_lattice(const Interval& t, double c) {
  if (width(t) >= 2) return true;
  double k = std::floor((t.lo() - c) / 2) - 1;
  for (int i = 0; i < 4; ++i, k += 1) {
    const double v = c + 2 * k;
    if (t.contains(v)) return true;
  }
  return false;
}

Interval trig_endpoints(double a, double b, double (*fn)(double)) {
  auto down = [&](double v) {
    const double y = fn(v);
    if (y == 0 && v == 0) return 0.0;
    return std::max(-1.0, pad_down(y));
  };
  auto up = [&](double v) {
    const double y = fn(v);
    if (y == 0 && v == 0) return 0.0;
    return std::min(1.0, pad_up(y));
  };
  return Interval(std::min(down(a), down(b)), std::max(up(a), up(b)));
}

// max_c / min_c: positions of the maxima / minima in units of pi, modulo 2.
Interval trig(const Interval& x, double (*fn)(double), double max_c, double min_c) {
  if (!x.is_finite() || x.mag() > kTrigHuge) return Interval(-1.0, 1.0);
  const Interval t = x / pi();
  Interval r = trig_endpoints(x.lo(), x.hi(), fn);
  double lo = r.lo(), hi = r.hi();
  if (hits_lattice(t, max_c)) hi = 1.0;
  if (hits_lattice(t, min_c)) lo = -1.0;
  return Interval(lo, hi);
}

double cos_exact(double v) { return v == 0 ? 1.0 : std::cos(v); }
double sin_fn(double v) { return std::sin(v); }

}  // namespace

Interval sin(const Interval& x) { return trig(x, sin_fn, 0.5, 1.5); }

Interval cos(const Interval& x) {
  if (x.is_thin() && x.lo() == 0) return Interval(1.0);
  return trig(x, cos_exact, 0.0, 1.0);
}

Interval clamp_nonneg(const Interval& x) {
  return Interval(std::max(0.0, x.lo()), std::max(0.0, x.hi()));
}

}  // namespace vreach
