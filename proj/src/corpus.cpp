#include "vreach/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include "json.hpp"

namespace vreach {

namespace {

Interval literal_hull(const std::string& lo, const std::string& hi) {
  const Literal a = parse_literal(lo), b = parse_literal(hi);
  return hull(Interval::around(a.value, a.exact), Interval::around(b.value, b.exact));
}

double number(const nlohmann::json& j) { return j.is_string() ? parse_literal(j.get<std::string>()).value : j.get<double>(); }

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

std::string BenchmarkSpec::path(const ExpectedRow& row) const { return dir + "/" + row.file; }

std::vector<BenchmarkSpec> models(const std::string& dir) {
  std::ifstream in(dir + "/expected.json");
  if (!in) throw Error("cannot open " + dir + "/expected.json");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("expected.json: ") + e.what());
  }
  std::vector<BenchmarkSpec> out;
  for (const auto& m : doc.at("models")) {
    BenchmarkSpec s;
    s.dir = dir;
    s.name = m.at("name").get<std::string>();
    s.description = m.value("description", "");
    s.acceptance = m.value("acceptance", false);
    for (const auto& r : m.at("rows")) {
      ExpectedRow row;
      row.label = r.at("label").get<std::string>();
      row.file = r.at("file").get<std::string>();
      row.k = r.at("k").get<int>();
      if (r.contains("goal_time")) row.goal_time = r.at("goal_time").get<double>();
      row.epsilon = number(r.at("epsilon"));
      row.lo_text = r.at("interval").at(0).get<std::string>();
      row.hi_text = r.at("interval").at(1).get<std::string>();
      row.interval = literal_hull(row.lo_text, row.hi_text);
      row.cpu_seq = r.value("cpu_seq", 0.0);
      row.cpu_par = r.value("cpu_par", 0.0);
      if (s.name == "T2" && row.goal_time) row.oracle = oracle_t2(10 * *row.goal_time, Interval(19.9, 20.1), 30, 1, row.k);
      s.rows.push_back(std::move(row));
    }
    if (m.contains("monte_carlo")) {
      for (const auto& r : m.at("monte_carlo")) {
        MonteCarloRow row;
        row.label = r.at("label").get<std::string>();
        row.k = r.at("k").get<int>();
        row.zeta = number(r.at("zeta"));
        row.confidence = number(r.at("confidence"));
        row.p = number(r.at("p"));
        row.ci = literal_hull(r.at("ci").at(0).get<std::string>(), r.at("ci").at(1).get<std::string>());
        row.cpu_seq = r.value("cpu_seq", 0.0);
        row.samples = r.at("samples").get<unsigned long long>();
        s.monte_carlo.push_back(std::move(row));
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

const BenchmarkSpec& find_model(const std::vector<BenchmarkSpec>& all, const std::string& name) {
  for (const auto& s : all)
    if (s.name == name) return s;
  throw Error("no benchmark named " + name);
}

std::vector<Interval> oracle_t2_region(double tau_goal, const Interval& goal, int k) {
  std::vector<Interval> out;
  const auto g = intersect(goal, Interval(18.0, 22.0));
  if (!g || k < 1) return out;
  const double t = tau_goal / 10;
  const double heat = std::log(1.5);          // 18 -> 22 while heating
  const double cool = std::log(22.0 / 18.0);  // 22 -> 18 while cooling
  // offset into the heating phase at which x = v: 30 - 12 exp(-s) = v
  const double s_lo = std::log(12 / (30 - g->lo()));
  const double s_hi = std::log(12 / (30 - g->hi()));
  for (int m = 0; 2 * m + 1 <= k; ++m) {
    // first jump at t1 = ln(x0 / 18), then m full cycles before this heating phase
    const double base = t - m * (heat + cool);
    const double t1_lo = std::max(0.0, base - s_hi);
    const double t1_hi = base - s_lo;
    if (t1_hi < 0) break;
    out.push_back(Interval(18 * std::exp(t1_lo), 18 * std::exp(t1_hi)));
  }
  std::reverse(out.begin(), out.end());
  return out;
}

double oracle_t2(double tau_goal, const Interval& goal, double mu, double sigma, int k) {
  double p = 0;
  for (const auto& r : oracle_t2_region(tau_goal, goal, k))
    p += std_normal_cdf((r.hi() - mu) / sigma) - std_normal_cdf((r.lo() - mu) / sigma);
  return p;
}

}  // namespace vreach
