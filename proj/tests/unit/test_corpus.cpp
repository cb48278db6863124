#include <cmath>

#include "doctest.h"
#include "oracle.hpp"
#include "vreach/corpus.hpp"
#include "vreach/montecarlo.hpp"

using namespace vreach;

TEST_CASE("five benchmarks") {
  const auto all = models();
  REQUIRE(all.size() == 5);
  std::vector<std::string> names;
  for (const auto& s : all) names.push_back(s.name);
  CHECK(names == std::vector<std::string>{"BB", "T2", "T4", "CBB", "IG"});

  const auto& t2 = find_model(all, "T2");
  CHECK(t2.acceptance);
  REQUIRE(t2.rows.size() == 3);
  CHECK(t2.rows[0].lo_text == "0.006678444555");
  CHECK(t2.rows[0].hi_text == "0.0066784456");
  CHECK(t2.rows[0].interval.contains(Interval(0.006678444555, 0.0066784456)));
  CHECK(t2.rows[1].k == 5);
  CHECK(t2.rows[2].k == 7);
  for (const auto& r : t2.rows) {
    REQUIRE(r.goal_time);
    REQUIRE(r.oracle);
    CHECK(r.epsilon == 1e-9);
  }

  for (const char* n : {"BB", "T4", "CBB", "IG"}) CHECK_FALSE(find_model(all, n).acceptance);
  CHECK_THROWS(find_model(all, "XX"));

  for (const auto& s : all) {
    for (const auto& r : s.rows) CHECK_NOTHROW(parse_file(s.path(r)));
    for (const auto& mc : s.monte_carlo) {
      CAPTURE(mc.label);
      const auto n = chernoff_size(mc.zeta, mc.confidence);
      if (mc.samples == 230258509300ULL || mc.samples == 92104ULL) {
        CHECK(n == mc.samples);
      } else {
        // printed size of a published row that the bound does not reproduce exactly
        CHECK(std::fabs(static_cast<double>(n) - static_cast<double>(mc.samples)) <= 1e-5 * mc.samples);
      }
    }
  }
}

TEST_CASE("thermostat oracle against a high-precision closed form") {
  for (double t : {0.6, 1.8, 2.4, 0.9, 3.3}) {
    for (int k : {1, 3, 5, 7, 1 << 20}) {
      CAPTURE(t);
      CAPTURE(k);
      const double lib = oracle_t2(10 * t, Interval(19.9, 20.1), 30, 1, k);
      const oracle::mp ref = oracle::thermostat(oracle::mp(t), oracle::mp("19.9"), oracle::mp("20.1"), k);
      CHECK(lib == doctest::Approx(static_cast<double>(ref)).epsilon(1e-12));
    }
  }
  const double p06 = oracle_t2(6, Interval(19.9, 20.1));
  CHECK(p06 == doctest::Approx(0.0066784).epsilon(1e-5));
  CHECK(oracle_t2(6, Interval(21, 21.5), 30, 1, 0) == 0);
}

TEST_CASE("satisfying regions") {
  const auto r = oracle_t2_region(6, Interval(19.9, 20.1), 1);
  REQUIRE(r.size() == 1);
  using boost::multiprecision::exp;
  CHECK(oracle::encloses(Interval(r[0].lo() - 1e-12, r[0].lo() + 1e-12), oracle::mp("14.85") * exp(oracle::mp("0.6"))));
  CHECK(oracle::encloses(Interval(r[0].hi() - 1e-12, r[0].hi() + 1e-12), oracle::mp("15.15") * exp(oracle::mp("0.6"))));

  // The whole heating range at tau = 6: the first jump happened at most
  // ln 1.5 before t = 0.6, so 12 e^{0.6} <= x0 <= 18 e^{0.6}.
  const auto whole = oracle_t2_region(6, Interval(18, 22), 1);
  REQUIRE(whole.size() == 1);
  CHECK(whole[0].lo() == doctest::Approx(12 * std::exp(0.6)).epsilon(1e-12));
  CHECK(whole[0].hi() == doctest::Approx(18 * std::exp(0.6)).epsilon(1e-12));
  const double pw = oracle_t2(6, Interval(18, 22), 30, 1, 1);
  const double a = whole[0].lo(), b = whole[0].hi();
  CHECK(pw == doctest::Approx(0.5 * (std::erfc(-(b - 30) / std::sqrt(2.0)) - std::erfc(-(a - 30) / std::sqrt(2.0)))));
  CHECK(oracle_t2_region(6, Interval(25, 26), 1).empty());
}

TEST_CASE("thermostat oracle agrees with Monte Carlo") {
  const auto all = models();
  const auto& t2 = find_model(all, "T2");
  for (const auto& row : t2.rows) {
    CAPTURE(row.label);
    MCConfig cfg;
    cfg.zeta = 1e-3;
    cfg.confidence = 0.99;
    cfg.k = row.k;
    cfg.step = 0.01;
    cfg.max_samples = 10000000;
    const MCResult r = estimate(parse_file(t2.path(row)), cfg);
    CHECK(r.ci.contains(*row.oracle));
  }
}
