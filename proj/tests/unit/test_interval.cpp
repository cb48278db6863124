#include <boost/math/special_functions/sin_pi.hpp>
#include <cmath>
#include <functional>

#include "doctest.h"
#include "oracle.hpp"
#include "vreach/box.hpp"
#include "vreach/expr.hpp"

using namespace vreach;
using oracle::mp;

namespace {

constexpr int kSamples = 10000;

struct ExactRange {
  mp lo, hi;
};

ExactRange corners(const Interval& a, const Interval& b, const std::function<mp(const mp&, const mp&)>& f) {
  const mp c[4] = {f(mp(a.lo()), mp(b.lo())), f(mp(a.lo()), mp(b.hi())), f(mp(a.hi()), mp(b.lo())),
                   f(mp(a.hi()), mp(b.hi()))};
  ExactRange r{c[0], c[0]};
  for (const auto& v : c) {
    if (v < r.lo) r.lo = v;
    if (v > r.hi) r.hi = v;
  }
  return r;
}

void check_tight(const Interval& r, const ExactRange& e) {
  CHECK(r.lo() == oracle::down(e.lo));
  CHECK(r.hi() == oracle::up(e.hi));
}

bool no_nan(const Interval& r) { return !std::isnan(r.lo()) && !std::isnan(r.hi()); }

/// Exact range of sin(x + shift) over x, shift = 0 for sin and pi/2 for cos.
ExactRange trig_range(const Interval& x, const mp& shift) {
  using boost::multiprecision::ceil;
  using boost::multiprecision::sin;
  const mp lo = mp(x.lo()) + shift, hi = mp(x.hi()) + shift;
  ExactRange r{sin(lo), sin(lo)};
  const mp s2 = sin(hi);
  if (s2 < r.lo) r.lo = s2;
  if (s2 > r.hi) r.hi = s2;
  const mp& pi = oracle::pi();
  const mp kmax = ceil((lo - pi / 2) / (2 * pi));
  if (pi / 2 + 2 * pi * kmax <= hi) r.hi = 1;
  const mp kmin = ceil((lo + pi / 2) / (2 * pi));
  if (-pi / 2 + 2 * pi * kmin <= hi) r.lo = -1;
  return r;
}

}  // namespace

TEST_CASE("examples") {
  CHECK(Interval(1, 2) + Interval(3, 4) == Interval(4, 6));
  CHECK(Interval(-1, 2) * Interval(3, 4) == Interval(-4, 8));

  const Interval third = Interval(1.0) / Interval(3.0);
  CHECK(oracle::encloses(third, mp(1) / 3));
  CHECK(third.hi() <= std::nextafter(std::nextafter(third.lo(), 1.0), 1.0));

  const Interval e0 = exp(Interval(0.0));
  CHECK(e0.contains(1.0));
  CHECK(e0.lo() >= std::nextafter(1.0, 0.0) - 2e-16);
  CHECK(e0.hi() <= 1.0 + 6e-16);

  const Interval s = sin(Interval(0.0, pi().hi()));
  CHECK(s.lo() <= 0);
  CHECK(s.hi() >= 1);

  const Interval e12 = exp(Interval(1, 2));
  CHECK(oracle::encloses(e12, boost::multiprecision::exp(mp(1))));
  CHECK(oracle::encloses(e12, boost::multiprecision::exp(mp(2))));

  CHECK(bisect(Interval(0, 2)).first == Interval(0, 1));
  CHECK(bisect(Interval(0, 2)).second == Interval(1, 2));
  CHECK(mid(Interval(-1, 1)) == 0);
  CHECK(width(Interval(3, 3.5)) >= 0.5);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(Interval(1.0) / Interval(-1, 1), DomainError);
  CHECK_THROWS_AS(Interval(1.0) / Interval(0.0), DomainError);
  CHECK_THROWS_AS(ln(Interval(-1, 2)), DomainError);
  CHECK_THROWS_AS(sqrt(Interval(-1, 2)), DomainError);
  CHECK_THROWS_AS(bisect(Interval(1.0)), CannotSplit);
  CHECK_THROWS_AS(bisect(Interval(1.0, std::nextafter(1.0, 2.0))), CannotSplit);
  CHECK_THROWS(Interval(2, 1));
  CHECK_THROWS(Interval(std::nan(""), 1));
  CHECK_FALSE(intersect(Interval(0, 1), Interval(2, 3)).has_value());
  CHECK(*intersect(Interval(0, 2), Interval(1, 3)) == Interval(1, 2));
  CHECK(hull(Interval(0, 1), Interval(2, 3)) == Interval(0, 3));
}

TEST_CASE("expression examples") {
  Box env;
  env.set("x", Interval(0, 1));
  const auto x = make_var("x");
  const auto e = make_binary(ExprKind::Sub, make_binary(ExprKind::Mul, x, x), x);
  const Interval r = eval(*e, env);
  CHECK(r.contains(Interval(-0.25, 0)));
  CHECK(Interval(-1, 1).contains(r));
  for (int i = 0; i <= 1000; ++i) {
    const double v = i / 1000.0;
    CHECK(r.contains(v * v - v));
  }

  Box zero;
  zero.set("x", Interval(0.0));
  const Interval ex = eval(*make_call(Func::Exp, make_neg(x)), zero);
  CHECK(ex.contains(1.0));
  CHECK(width(ex) <= 1e-15);
  CHECK(eval(*make_const("1.0"), zero) == Interval(1.0));
  CHECK_THROWS(eval(*make_var("y"), zero));
  CHECK_THROWS_AS(eval(*make_binary(ExprKind::Div, make_const("1"), x), zero), DomainError);
}

TEST_CASE("containment and tightness of exactly rounded operations") {
  oracle::Gen g(11);
  for (int i = 0; i < kSamples; ++i) {
    const Interval a = g.interval(), b = g.interval();
    const Interval s = a + b, d = a - b, p = a * b;
    REQUIRE(no_nan(s));
    check_tight(s, {mp(a.lo()) + mp(b.lo()), mp(a.hi()) + mp(b.hi())});
    check_tight(d, {mp(a.lo()) - mp(b.hi()), mp(a.hi()) - mp(b.lo())});
    check_tight(p, corners(a, b, [](const mp& x, const mp& y) { return x * y; }));
    check_tight(-a, {-mp(a.hi()), -mp(a.lo())});
    if (!b.contains_zero()) check_tight(a / b, corners(a, b, [](const mp& x, const mp& y) { return x / y; }));
    const double u = g.inside(a), v = g.inside(b);
    CHECK(oracle::encloses(p, mp(u) * mp(v)));
    CHECK(oracle::encloses(s, mp(u) + mp(v)));
  }
}

TEST_CASE("containment near the ends of the exponent range") {
  oracle::Gen g(12);
  for (int i = 0; i < kSamples; ++i) {
    const bool tiny = g.integer(0, 1);
    const Interval a = tiny ? g.interval(-540, -480) : g.interval(480, 540);
    const Interval b = tiny ? g.interval(-540, -480) : g.interval(480, 540);
    const auto p = corners(a, b, [](const mp& x, const mp& y) { return x * y; });
    const Interval r = a * b;
    CHECK(mp(r.lo()) <= p.lo);
    CHECK(p.hi <= mp(r.hi()));
    if (!b.contains_zero()) {
      const auto q = corners(a, b, [](const mp& x, const mp& y) { return x / y; });
      const Interval rq = a / b;
      CHECK(mp(rq.lo()) <= q.lo);
      CHECK(q.hi <= mp(rq.hi()));
    }
    const Interval s = a + b;
    CHECK(mp(s.lo()) <= mp(a.lo()) + mp(b.lo()));
    CHECK(mp(a.hi()) + mp(b.hi()) <= mp(s.hi()));
  }
}

TEST_CASE("powers and roots") {
  oracle::Gen g(13);
  for (int i = 0; i < kSamples; ++i) {
    const Interval a = g.interval(-8, 8);
    const int n = g.integer(0, 7);
    const Interval r = pow_int(a, n);
    REQUIRE(no_nan(r));
    for (double v : {a.lo(), a.hi(), g.inside(a)}) CHECK(oracle::encloses(r, boost::multiprecision::pow(mp(v), n)));
    if (a.contains_zero() && n > 0) CHECK(r.contains(0.0));
    const Interval q = sqr(a);
    CHECK(q.lo() >= 0);
    const double w = g.inside(a);
    CHECK(oracle::encloses(q, mp(w) * mp(w)));
    CHECK(oracle::encloses(q, mp(a.lo()) * mp(a.lo())));
    const Interval pos(std::fabs(a.lo()) < std::fabs(a.hi()) ? std::fabs(a.lo()) : std::fabs(a.hi()), a.mag());
    check_tight(sqrt(pos),
                {boost::multiprecision::sqrt(mp(pos.lo())), boost::multiprecision::sqrt(mp(pos.hi()))});
    const auto ab = abs(a);
    CHECK(ab.lo() == a.mig());
    CHECK(ab.hi() == a.mag());
  }
}

TEST_CASE("transcendental containment") {
  oracle::Gen g(14);
  for (int i = 0; i < kSamples; ++i) {
    const Interval a = g.interval(-6, 6);
    const Interval e = exp(a);
    REQUIRE(no_nan(e));
    CHECK(oracle::encloses(e, boost::multiprecision::exp(mp(a.lo()))));
    CHECK(oracle::encloses(e, boost::multiprecision::exp(mp(a.hi()))));
    CHECK(oracle::encloses(e, boost::multiprecision::exp(mp(g.inside(a)))));

    const Interval pos(std::max(a.mig(), 1e-300), std::max(a.mag(), 1e-300));
    const Interval l = ln(pos);
    CHECK(oracle::encloses(l, boost::multiprecision::log(mp(pos.lo()))));
    CHECK(oracle::encloses(l, boost::multiprecision::log(mp(pos.hi()))));

    const Interval s = sin(a), c = cos(a);
    REQUIRE(no_nan(s));
    REQUIRE(no_nan(c));
    const auto rs = trig_range(a, 0), rc = trig_range(a, oracle::pi() / 2);
    CHECK(mp(s.lo()) <= rs.lo);
    CHECK(rs.hi <= mp(s.hi()));
    CHECK(mp(c.lo()) <= rc.lo);
    CHECK(rc.hi <= mp(c.hi()));
    const double v = g.inside(a);
    CHECK(oracle::encloses(s, boost::multiprecision::sin(mp(v))));
    CHECK(oracle::encloses(c, boost::multiprecision::cos(mp(v))));
  }
}

TEST_CASE("trigonometry on large arguments") {
  oracle::Gen g(15);
  for (int i = 0; i < 2000; ++i) {
    const double a = g.uniform(-1e6, 1e6);
    const Interval x(a, a + g.uniform(0, 4));
    const auto rs = trig_range(x, 0);
    const Interval s = sin(x);
    CHECK(mp(s.lo()) <= rs.lo);
    CHECK(rs.hi <= mp(s.hi()));
  }
  CHECK(sin(Interval(0, 10)) == Interval(-1, 1));
  CHECK(oracle::encloses(pi(), oracle::pi()));
  CHECK(width(pi()) <= 5e-16);
}

TEST_CASE("inclusion isotonicity") {
  oracle::Gen g(16);
  using F = std::function<Interval(const Interval&)>;
  const std::vector<F> unary = {
      [](const Interval& x) { return exp(x); },       [](const Interval& x) { return sin(x); },
      [](const Interval& x) { return cos(x); },       [](const Interval& x) { return abs(x); },
      [](const Interval& x) { return sqr(x); },       [](const Interval& x) { return pow_int(x, 3); },
      [](const Interval& x) { return -x; },           [](const Interval& x) { return x * x - x; },
  };
  for (int i = 0; i < kSamples; ++i) {
    const Interval outer = g.interval(-5, 5), inner = g.sub(outer);
    for (const auto& f : unary) CHECK(f(outer).contains(f(inner)));
    const Interval pos(outer.mig() + 1e-3, outer.mag() + 1e-3), pin = g.sub(pos);
    CHECK(ln(pos).contains(ln(pin)));
    CHECK(sqrt(pos).contains(sqrt(pin)));
    const Interval b = g.interval(-5, 5), bin = g.sub(b);
    CHECK((outer + b).contains(inner + bin));
    CHECK((outer - b).contains(inner - bin));
    CHECK((outer * b).contains(inner * bin));
    if (!b.contains_zero()) CHECK((outer / b).contains(inner / bin));
  }
}

TEST_CASE("bisection halves") {
  oracle::Gen g(17);
  for (int i = 0; i < kSamples; ++i) {
    const Interval x = g.interval();
    if (x.is_thin() || std::nextafter(x.lo(), x.hi()) == x.hi()) continue;
    const auto [l, r] = bisect(x);
    CHECK(l.lo() == x.lo());
    CHECK(r.hi() == x.hi());
    CHECK(l.hi() == r.lo());
    CHECK(x.contains(mid(x)));
    const double half = width(x) / 2;
    CHECK(width(l) <= std::nextafter(half, INFINITY) + std::nextafter(x.mag(), INFINITY) * 0x1p-52);
    CHECK(width(r) <= std::nextafter(half, INFINITY) + std::nextafter(x.mag(), INFINITY) * 0x1p-52);
  }
}

TEST_CASE("literal enclosures") {
  for (const char* text : {"0.1", "19.9", "20.1", "0.7854", "1e-3", "3.14159265358979323846"}) {
    const Literal lit = parse_literal(text);
    CHECK_FALSE(lit.exact);
    const Interval enc = Interval::around(lit.value, lit.exact);
    CHECK(oracle::encloses(enc, mp(text)));
    CHECK(enc.contains(lit.value));
  }
  for (const char* text : {"30", "0.5", "1.0", "22", "0.25e1"}) {
    const Literal lit = parse_literal(text);
    CHECK(lit.exact);
    CHECK(mp(lit.value) == mp(text));
  }
}
