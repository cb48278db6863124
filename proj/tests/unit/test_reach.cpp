#include <cmath>

#include "doctest.h"
#include "oracle.hpp"
#include "vreach/corpus.hpp"
#include "vreach/montecarlo.hpp"
#include "vreach/reach.hpp"

using namespace vreach;

namespace {

ExprPtr v(const char* n) { return make_var(n); }
ExprPtr c(const char* t) { return make_const(std::string(t)); }
ExprPtr bin(ExprKind k, ExprPtr a, ExprPtr b) { return make_binary(k, std::move(a), std::move(b)); }

std::string model_path(const char* file) { return std::string(VREACH_MODELS_DIR) + "/" + file; }

/// Hull of the step enclosures covering local time t.
std::optional<std::vector<Interval>> at(const FlowEnclosure& fe, double t) {
  std::optional<std::vector<Interval>> out;
  if (fe.steps.empty()) {
    for (std::size_t j = 0; j < fe.times.size(); ++j)
      if (fe.times[j].contains(t)) out = fe.tubes[j];
    return out;
  }
  for (const auto& st : fe.steps) {
    if (t < st.t0 || t > st.t0 + st.h) continue;
    const auto y = st.eval(Interval(t - st.t0));
    if (!out) {
      out = y;
    } else {
      for (std::size_t i = 0; i < y.size(); ++i) (*out)[i] = hull((*out)[i], y[i]);
    }
  }
  return out;
}

Box box1(const char* n, Interval x) {
  Box b;
  b.set(n, x);
  return b;
}

const char* kBlowUp = R"(
[0, 2] time;
[0, 1e300] x;
U(1, 2) r;
{ mode 1;
flow:
d/dt[x] = x * x;
}
init:
@1 (x = r);
goal:
@1 (x <= -1);
goal_c:
@1 (x > -1);
)";

}  // namespace

TEST_CASE("enclosure examples") {
  const std::map<std::string, ExprPtr> decay{{"x", make_neg(v("x"))}};
  const FlowEnclosure z = ode_enclose(decay, box1("x", Interval(18.0)), Interval(0.0));
  const auto z0 = at(z, 0.0);
  REQUIRE(z0);
  CHECK((*z0)[0] == Interval(18.0));

  const FlowEnclosure fe = ode_enclose(decay, box1("x", Interval(27, 28)), Interval(0, 0.4));
  const auto y = at(fe, 0.4);
  REQUIRE(y);
  using boost::multiprecision::exp;
  const oracle::mp lo = 27 * exp(oracle::mp(-0.4)), hi = 28 * exp(oracle::mp(-0.4));
  CHECK(oracle::encloses((*y)[0], lo));
  CHECK(oracle::encloses((*y)[0], hi));
  CHECK(width((*y)[0]) <= 2 * static_cast<double>(hi - lo));

  const FlowEnclosure tau = ode_enclose({{"tau", c("10")}}, box1("tau", Interval(0.0)), Interval(0, 0.6));
  const auto t6 = at(tau, 0.6);
  REQUIRE(t6);
  CHECK((*t6)[0].contains(6.0));
  CHECK(width((*t6)[0]) <= 1e-6);
}

TEST_CASE("tubes contain exact solutions of linear flows") {
  oracle::Gen g(51);
  ReachConfig cfg;
  // x' = -x + 30 (heating), rotation x' = y, y' = -x, damped x' = y, y' = -x - y/2
  const std::map<std::string, ExprPtr> heat{{"x", bin(ExprKind::Sub, c("30"), v("x"))}};
  const std::map<std::string, ExprPtr> rot{{"x", v("y")}, {"y", make_neg(v("x"))}};
  for (int i = 0; i < 20; ++i) {
    const double a = g.uniform(15, 25), w = g.uniform(0, 2);
    const FlowEnclosure fe = ode_enclose(heat, box1("x", Interval(a, a + w)), Interval(0, 3), cfg);
    REQUIRE(fe.times.size() == fe.tubes.size());
    for (int s = 0; s < 200; ++s) {
      const double x0 = g.uniform(a, a + w), t = g.uniform(0, 3);
      const double exact = 30 - (30 - x0) * std::exp(-t);
      const auto y = at(fe, t);
      REQUIRE(y);
      CHECK((*y)[0].contains(exact));
      for (std::size_t j = 0; j < fe.times.size(); ++j)
        if (fe.times[j].contains(t)) CHECK(fe.tubes[j][0].contains(exact));
    }
  }
  for (int i = 0; i < 20; ++i) {
    const double a = g.uniform(-2, 2), b = g.uniform(-2, 2), w = g.uniform(0, 0.5);
    Box init;
    init.set("x", Interval(a, a + w));
    init.set("y", Interval(b, b + w));
    const FlowEnclosure fe = ode_enclose(rot, init, Interval(0, 6), cfg);
    for (int s = 0; s < 200; ++s) {
      const double x0 = g.uniform(a, a + w), y0 = g.uniform(b, b + w), t = g.uniform(0, 6);
      const double x = x0 * std::cos(t) + y0 * std::sin(t), y = -x0 * std::sin(t) + y0 * std::cos(t);
      const auto e = at(fe, t);
      REQUIRE(e);
      CHECK((*e)[0].contains(x));
      CHECK((*e)[1].contains(y));
      for (std::size_t j = 0; j < fe.times.size(); ++j) {
        if (!fe.times[j].contains(t)) continue;
        CHECK(fe.tubes[j][0].contains(x));
        CHECK(fe.tubes[j][1].contains(y));
      }
    }
  }
}

TEST_CASE("enclosure failure on finite-time blow-up") {
  const std::map<std::string, ExprPtr> sq{{"x", bin(ExprKind::Mul, v("x"), v("x"))}};
  CHECK_THROWS_AS(ode_enclose(sq, box1("x", Interval(1.0)), Interval(0, 2)), EnclosureFailure);
  const Engine engine(parse(kBlowUp));
  ReachStats st;
  const CellClass cls = engine.classify(Interval(1, 1.5), 0, 1e-3, &st);
  CHECK(cls != CellClass::Zero);
  CHECK_FALSE(st.warnings.empty());
}

TEST_CASE("thermostat examples") {
  const HybridModel m = parse_file(model_path("thermostat2.pdrh"));
  const Engine engine(m);
  CHECK(engine.classify(Interval(35, 36), 1, 1e-3) == CellClass::Zero);
  CHECK(engine.classify(Interval(27.2, 27.4), 1, 1e-3) == CellClass::One);
  CHECK(engine.classify(Interval(26.5, 28.5), 1, 1e-3) == CellClass::Mixed);

  const auto [far, far_c] = instantiate(m, Interval(35, 36), 1, 1e-3);
  CHECK(engine.evaluate(far) == Verdict::Unsat);
  const auto [in, in_c] = instantiate(m, Interval(27.2, 27.4), 1, 1e-3);
  CHECK(engine.evaluate(in) == Verdict::DeltaSat);
  CHECK(engine.evaluate(in_c) == Verdict::Unsat);

  const auto region = oracle_t2_region(6, Interval(19.9, 20.1), 1);
  REQUIRE(region.size() == 1);
  CHECK(region[0].lo() == doctest::Approx(27.0585).epsilon(1e-5));
  CHECK(region[0].hi() == doctest::Approx(27.6051).epsilon(1e-5));
}

TEST_CASE("unsat is monotone in delta and in the cell") {
  const HybridModel m = parse_file(model_path("thermostat2.pdrh"));
  const Engine engine(m);
  oracle::Gen g(52);
  const std::vector<double> deltas{1e-1, 3e-2, 1e-2, 1e-3, 1e-4, 1e-5};
  for (int i = 0; i < 60; ++i) {
    const double a = g.uniform(24, 36), w = std::ldexp(1.0, g.integer(-8, 1));
    const Interval cell(a, a + w);
    const auto [q, qc] = instantiate(m, cell, 1);
    bool unsat = false, unsat_c = false;
    for (double d : deltas) {
      ReachQuery x = q, xc = qc;
      x.delta = xc.delta = d;
      const bool u = engine.evaluate(x) == Verdict::Unsat, uc = engine.evaluate(xc) == Verdict::Unsat;
      if (unsat) CHECK(u);
      if (unsat_c) CHECK(uc);
      unsat = unsat || u;
      unsat_c = unsat_c || uc;
    }
    const CellClass outer = engine.classify(cell, 1, 1e-3);
    for (int j = 0; j < 3; ++j) {
      const Interval sub = g.sub(cell);
      const CellClass inner = engine.classify(sub, 1, 1e-3);
      if (outer != CellClass::Mixed) CHECK(inner == outer);
    }
  }
}

TEST_CASE("zero and one cells agree with simulation") {
  struct Case {
    const char* file;
    int k;
    double lo, hi, w;
  };
  for (const Case& cs : {Case{"thermostat2.pdrh", 1, 24, 36, 0.5}, Case{"thermostat2_18.pdrh", 5, 25, 35, 1.0},
                         Case{"bouncing_ball.pdrh", 1, 15, 25, 0.5}}) {
    CAPTURE(cs.file);
    const HybridModel m = parse_file(model_path(cs.file));
    const Engine engine(m);
    const Simulator sim(m);
    oracle::Gen g(53);
    int decided = 0;
    for (double a = cs.lo; a < cs.hi; a += cs.w) {
      const Interval cell(a, a + cs.w);
      const CellClass cls = engine.classify(cell, cs.k, 1e-3);
      if (cls == CellClass::Mixed) continue;
      ++decided;
      for (int s = 0; s < 1000; ++s) {
        const double r = g.inside(cell);
        CAPTURE(r);
        CHECK(sim.run(r, cs.k, 1e-3).reached == (cls == CellClass::One));
      }
    }
    CHECK(decided > 0);
  }
}
