#include "doctest.h"
#include "oracle.hpp"
#include "vreach/density.hpp"
#include "vreach/integrator.hpp"
#include "vreach/pdrh.hpp"

using namespace vreach;
using oracle::mp;

namespace {

mp exact_pdf(const DistributionSpec& s, const mp& x) {
  using boost::multiprecision::exp;
  switch (s.kind) {
    case DistributionSpec::Kind::Normal: return oracle::normal_pdf(x, mp(s.p1d), mp(s.p2d));
    case DistributionSpec::Kind::Uniform:
      return (x < mp(s.p1d) || x > mp(s.p2d)) ? mp(0) : 1 / (mp(s.p2d) - mp(s.p1d));
    case DistributionSpec::Kind::Exponential: return x < 0 ? mp(0) : mp(s.p1d) * exp(-mp(s.p1d) * x);
    default: return 0;
  }
}

mp exact_d4(const DistributionSpec& s, const mp& x) {
  switch (s.kind) {
    case DistributionSpec::Kind::Normal: {
      const mp sg = s.p2d, z = (x - mp(s.p1d)) / sg;
      return exact_pdf(s, x) * (z * z * z * z - 6 * z * z + 3) / (sg * sg * sg * sg);
    }
    case DistributionSpec::Kind::Uniform: return 0;
    case DistributionSpec::Kind::Exponential: {
      const mp l = s.p1d;
      return l * l * l * l * exact_pdf(s, x);
    }
    default: return 0;
  }
}

std::vector<DistributionSpec> builtins() {
  return {DistributionSpec::normal(30, 1), DistributionSpec::normal(0, 1), DistributionSpec::normal(-2, 0.25),
          DistributionSpec::uniform(0, 1), DistributionSpec::uniform(-3, 5), DistributionSpec::exponential(1),
          DistributionSpec::exponential(0.5), DistributionSpec::exponential(4)};
}

Interval random_in(oracle::Gen& g, const DistributionSpec& s) {
  double c = 0, r = 4;
  if (s.kind == DistributionSpec::Kind::Normal) c = s.p1d, r = 8 * s.p2d;
  if (s.kind == DistributionSpec::Kind::Uniform) c = (s.p1d + s.p2d) / 2, r = (s.p2d - s.p1d);
  if (s.kind == DistributionSpec::Kind::Exponential) c = 4 / s.p1d, r = 5 / s.p1d;
  double a = g.uniform(c - r, c + r), b = a + std::ldexp(g.uniform(0, 1), g.integer(-20, 1));
  if (s.kind == DistributionSpec::Kind::Exponential) a = std::max(a, 0.0), b = std::max(b, a);
  return Interval(a, b);
}

const char* kNormalAsExpr = R"(
[0, 1] time;
pdf(exp(-(x - 30) ^ 2 / 2) / sqrt(2 * 3.14159265358979323846264338327950288), 18, 42) x;
{ mode 1;
}
init:
@1 (time = 0);
goal:
@1 (x >= 30);
goal_c:
@1 (x < 30);
)";

}  // namespace

TEST_CASE("pdf examples") {
  const Distribution n(DistributionSpec::normal(30, 1));
  CHECK(oracle::encloses(n.pdf(Interval(30.0)), 1 / boost::multiprecision::sqrt(2 * oracle::pi())));
  CHECK(width(n.pdf(Interval(30.0))) < 1e-15);
  const Distribution u(DistributionSpec::uniform(0, 1));
  const Interval pu = u.pdf(Interval(0.2, 0.7));
  CHECK(pu.contains(1.0));
  CHECK(width(pu) <= 4.5e-16);
  const Distribution e(DistributionSpec::exponential(1));
  CHECK(e.pdf(Interval(0.0)).contains(1.0));
  CHECK(u.pdf(Interval(2, 3)) == Interval(0.0));
  CHECK(u.pdf(Interval(0.5, 3)).contains(Interval(0, 1)));
}

TEST_CASE("fourth derivative examples") {
  const Distribution n(DistributionSpec::normal(0, 1));
  const Interval d = n.d4(Interval(0.0));
  CHECK(oracle::encloses(d, 3 / boost::multiprecision::sqrt(2 * oracle::pi())));
  CHECK(mid(d) == doctest::Approx(1.19683).epsilon(5e-6));
  CHECK(Distribution(DistributionSpec::uniform(0, 1)).d4(Interval(0.2, 0.7)) == Interval(0.0));
  CHECK(Distribution(DistributionSpec::exponential(1)).d4(Interval(0.0)).contains(1.0));
}

TEST_CASE("pdf and d4 contain sampled exact values") {
  oracle::Gen g(21);
  for (const auto& s : builtins()) {
    const Distribution d(s);
    for (int i = 0; i < 3000; ++i) {
      const Interval x = random_in(g, s);
      const Interval p = d.pdf(x), q = d.d4(x);
      CHECK(p.lo() >= 0);
      for (double v : {x.lo(), x.hi(), g.inside(x)}) {
        if (s.kind == DistributionSpec::Kind::Uniform && (v == s.p1d || v == s.p2d)) continue;
        CHECK(oracle::encloses(p, exact_pdf(s, mp(v))));
        if (d.support().contains(v)) CHECK(oracle::encloses(q, exact_d4(s, mp(v))));
      }
    }
  }
}

TEST_CASE("tail bounds") {
  const Distribution u(DistributionSpec::uniform(0, 1));
  CHECK(u.tail_bounds(1e-9).domain == Interval(0, 1));
  CHECK(u.tail_bounds(1e-9).tail == 0);

  const TailBounds n = Distribution(DistributionSpec::normal(0, 1)).tail_bounds(1e-9);
  CHECK(n.domain.hi() >= 6.1);
  CHECK(n.domain.lo() == -n.domain.hi());
  CHECK(n.tail <= 1e-9);
  CHECK(2 * oracle::Phi(-mp(n.domain.hi())) <= mp(n.tail));

  const TailBounds e = Distribution(DistributionSpec::exponential(1)).tail_bounds(1e-6);
  CHECK(e.domain.lo() == 0);
  CHECK(e.domain.hi() >= 13.8);
  CHECK(boost::multiprecision::exp(-mp(e.domain.hi())) <= mp(e.tail));

  CHECK_THROWS_AS(u.tail_bounds(0), DomainError);
  CHECK_THROWS_AS(u.tail_bounds(1), DomainError);
}

TEST_CASE("tail bounds are certified by the integrator") {
  for (const auto& s : builtins()) {
    const Distribution d(s);
    for (double mass : {1e-2, 5e-5, 1e-8}) {
      const TailBounds tb = d.tail_bounds(mass);
      CHECK(tb.tail <= mass);
      CHECK(d.support().contains(tb.domain));
      const Interval total = total_mass(partition(d, tb.domain, mass / 100));
      CHECK(total.lo() >= 1 - mass);
    }
  }
}

TEST_CASE("a density written as an expression agrees with the built-in normal") {
  const DistributionSpec us = extract_random(parse(kNormalAsExpr));
  REQUIRE(us.kind == DistributionSpec::Kind::UserPdf);
  const Distribution user(us), normal(DistributionSpec::normal(30, 1));
  oracle::Gen g(22);
  for (int i = 0; i < 1000; ++i) {
    const double a = g.uniform(19, 41), b = a + std::ldexp(g.uniform(0, 1), g.integer(-20, 0));
    const Interval x(a, b);
    const Interval pu = user.pdf(x), pn = normal.pdf(x);
    CHECK(pu.intersects(pn));
    const double tol = 1e-13 * pn.hi() + 1e-300;
    CHECK(std::fabs(pu.lo() - pn.lo()) <= tol);
    CHECK(std::fabs(pu.hi() - pn.hi()) <= tol);
    const Interval du = user.d4(x), dn = normal.d4(x);
    CHECK(du.intersects(dn));
    CHECK(oracle::encloses(du, exact_d4(DistributionSpec::normal(30, 1), mp(g.inside(x)))));
  }
  CHECK_THROWS(Distribution(DistributionSpec::user("x", make_call(Func::Abs, make_var("x")), Interval(0, 1))));
}

TEST_CASE("first derivative contains sampled exact values") {
  oracle::Gen g(23);
  for (const auto& s : builtins()) {
    const Distribution d(s);
    for (int i = 0; i < 2000; ++i) {
      const Interval x = random_in(g, s);
      const double v = g.inside(x);
      if (!d.support().contains(v)) continue;
      mp exact = 0;
      if (s.kind == DistributionSpec::Kind::Normal) exact = -exact_pdf(s, mp(v)) * (mp(v) - mp(s.p1d)) / (mp(s.p2d) * mp(s.p2d));
      if (s.kind == DistributionSpec::Kind::Exponential) exact = -mp(s.p1d) * exact_pdf(s, mp(v));
      CHECK(oracle::encloses(d.d1(x), exact));
    }
  }
}
