#include <cmath>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "vreach/expr.hpp"
#include "vreach/pdrh.hpp"
#include "vreach/program.hpp"

using namespace vreach;

namespace {

int xy_slot(const std::string& n) {
  if (n == "x") return 0;
  if (n == "y") return 1;
  throw Error("unknown " + n);
}

ExprPtr x() { return make_var("x"); }
ExprPtr y() { return make_var("y"); }
ExprPtr c(const char* t) { return make_const(std::string(t)); }
ExprPtr bin(ExprKind k, ExprPtr a, ExprPtr b) { return make_binary(k, std::move(a), std::move(b)); }

/// sin(x) * y - exp(x / (1 + exp(y))) + x ^ 3
ExprPtr sample_expr() {
  const auto den = bin(ExprKind::Add, c("1"), make_call(Func::Exp, y()));
  return bin(ExprKind::Add,
             bin(ExprKind::Sub, bin(ExprKind::Mul, make_call(Func::Sin, x()), y()),
                 make_call(Func::Exp, bin(ExprKind::Div, x(), den))),
             bin(ExprKind::Pow, x(), c("3")));
}

double lookup_xy(const std::string& n, double vx, double vy) { return n == "x" ? vx : vy; }

}  // namespace

TEST_CASE("program evaluation agrees with the tree") {
  const auto e = sample_expr();
  Program prog;
  const int root = prog.compile(*e, xy_slot);
  oracle::Gen g(3);
  std::vector<Interval> val;
  std::vector<double> dval;
  for (int i = 0; i < 2000; ++i) {
    const Interval bx = g.interval(-3, 2), by = g.interval(-3, 2);
    const std::vector<Interval> box{bx, by};
    prog.run<Interval, IntervalArith>(std::span<const Interval>(box), val);
    Box env;
    env.set("x", bx);
    env.set("y", by);
    const Interval tree = eval(*e, env);
    const double px = g.inside(bx), py = g.inside(by);
    const double pt = eval_point(*e, [&](const std::string& n) { return lookup_xy(n, px, py); });
    CHECK(val[root].contains(pt));
    CHECK(tree.contains(pt));
    const std::vector<double> pts{px, py};
    prog.run<double, DoubleArith>(std::span<const double>(pts), dval);
    CHECK(dval[root] == doctest::Approx(pt).epsilon(1e-12));
  }
}

TEST_CASE("symbolic derivative matches central differences") {
  const auto e = sample_expr();
  const auto dx = derivative(e, "x");
  const auto dy = derivative(e, "y");
  oracle::Gen g(4);
  for (int i = 0; i < 500; ++i) {
    const double px = g.uniform(-2, 2), py = g.uniform(-2, 2), h = 1e-6;
    auto f = [&](double a, double b) { return eval_point(*e, [&](const std::string& n) { return lookup_xy(n, a, b); }); };
    const double nx = (f(px + h, py) - f(px - h, py)) / (2 * h);
    const double ny = (f(px, py + h) - f(px, py - h)) / (2 * h);
    CHECK(eval_point(*dx, [&](const std::string& n) { return lookup_xy(n, px, py); }) ==
          doctest::Approx(nx).epsilon(1e-6));
    CHECK(eval_point(*dy, [&](const std::string& n) { return lookup_xy(n, px, py); }) ==
          doctest::Approx(ny).epsilon(1e-6));
  }
  CHECK_THROWS_AS(derivative(make_call(Func::Abs, x()), "x"), Error);
}

TEST_CASE("printing and structural equality") {
  const auto e = sample_expr();
  CHECK(equal(*e, *sample_expr()));
  CHECK_FALSE(equal(*e, *x()));
  CHECK(print(*c("19.9")) == "19.9");
  std::set<std::string> vars;
  free_vars(*e, vars);
  CHECK(vars == std::set<std::string>{"x", "y"});
  CHECK(is_constant(*bin(ExprKind::Mul, c("2"), c("0.5"))));
}

TEST_CASE("three-valued predicate evaluation") {
  // x >= 19.9 and x <= 20.1
  const Pred band = Pred::all({Pred::atom(x(), Cmp::Ge, c("19.9")), Pred::atom(x(), Cmp::Le, c("20.1"))});
  const PredEval pe(band, xy_slot);
  auto at = [&](Interval v, double delta) {
    const std::vector<Interval> box{v, Interval(0.0)};
    return pe.eval(box, delta);
  };
  CHECK(at(Interval(19.95, 20.05), 0) == Truth::True);
  CHECK(at(Interval(25, 26), 0) == Truth::False);
  CHECK(at(Interval(19, 20), 0) == Truth::Unknown);
  CHECK(at(Interval(20.1005, 20.2), 0) == Truth::False);
  CHECK(at(Interval(20.1005, 20.2), 1e-3) == Truth::Unknown);

  const Pred eq = Pred::atom(y(), Cmp::Eq, c("6"));
  const PredEval pq(eq, xy_slot);
  const std::vector<Interval> thin{Interval(0.0), Interval(6.0)};
  CHECK(pq.eval(thin, 0) == Truth::True);
  const std::vector<Interval> near{Interval(0.0), Interval(6.0005)};
  CHECK(pq.eval(near, 0) == Truth::False);
  CHECK(pq.eval(near, 1e-3) == Truth::True);

  const Pred neg = nnf(Pred::negate(band));
  CHECK(neg.kind == Pred::Kind::Or);
  const PredEval pn(neg, xy_slot);
  const std::vector<Interval> inside{Interval(20.0), Interval(0.0)};
  CHECK(pn.eval(inside, 0) == Truth::False);
}

TEST_CASE("delta relaxation is monotone and contraction keeps every solution") {
  // (x*x + y <= 1 or x - y = 0.5) and y >= -1
  const Pred p = Pred::all(
      {Pred::any({Pred::atom(bin(ExprKind::Add, bin(ExprKind::Mul, x(), x()), y()), Cmp::Le, c("1")),
                  Pred::atom(bin(ExprKind::Sub, x(), y()), Cmp::Eq, c("0.5"))}),
       Pred::atom(y(), Cmp::Ge, c("-1"))});
  const PredEval pe(p, xy_slot);
  oracle::Gen g(5);
  auto rank = [](Truth t) { return t == Truth::False ? 0 : t == Truth::Unknown ? 1 : 2; };
  for (int i = 0; i < 3000; ++i) {
    const std::vector<Interval> box{g.interval(-2, 2), g.interval(-2, 2)};
    const double d1 = g.uniform(0, 0.1), d2 = d1 + g.uniform(0, 0.1);
    CHECK(rank(pe.eval(box, d1)) <= rank(pe.eval(box, d2)));

    std::vector<Interval> contracted = box;
    const bool nonempty = pe.contract(contracted, d1);
    for (int j = 0; j < 20; ++j) {
      const std::vector<double> pt{g.inside(box[0]), g.inside(box[1])};
      const std::vector<Interval> thin{Interval(pt[0]), Interval(pt[1])};
      if (pe.eval(thin, d1) == Truth::False) continue;
      REQUIRE(nonempty);
      CHECK(contracted[0].contains(pt[0]));
      CHECK(contracted[1].contains(pt[1]));
    }
    if (pe.eval(box, d1) == Truth::True) CHECK(nonempty);
  }
}

TEST_CASE("point truth") {
  const Pred p = Pred::all({Pred::atom(x(), Cmp::Ge, c("18")), Pred::atom(y(), Cmp::Eq, c("6"))});
  const PredEval pe(p, xy_slot);
  const std::vector<double> a{19, 6}, b{17, 6}, d{19, 6 + 1e-12}, e{19, 6.1};
  CHECK(pe.holds(a, 1e-9));
  CHECK_FALSE(pe.holds(b, 1e-9));
  CHECK(pe.holds(d, 1e-9));
  CHECK_FALSE(pe.holds(e, 1e-9));
  std::vector<double> vals;
  pe.atom_values(a, vals);
  REQUIRE(vals.size() == 2);
  CHECK(vals[0] == 1);
  CHECK(vals[1] == 0);
}
