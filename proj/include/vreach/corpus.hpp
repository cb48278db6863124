#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vreach/interval.hpp"
#include "vreach/pdrh.hpp"

namespace vreach {

/// One published verified-computation row.
struct ExpectedRow {
  std::string label;
  std::string file;  // model file name inside the corpus directory
  int k = 0;
  std::optional<double> goal_time;
  double epsilon = 0;
  Interval interval{0.0};  // outward enclosure of the printed endpoints
  std::string lo_text, hi_text;
  double cpu_seq = 0, cpu_par = 0;
  std::optional<double> oracle;  // closed-form probability, where known
};

/// One published Monte Carlo row.
struct MonteCarloRow {
  std::string label;
  int k = 0;
  double zeta = 0, confidence = 0, p = 0;
  Interval ci{0.0};
  double cpu_seq = 0;
  unsigned long long samples = 0;
};

struct BenchmarkSpec {
  std::string name;
  std::string description;
  bool acceptance = false;  // quantitative rows are acceptance targets
  std::vector<ExpectedRow> rows;
  std::vector<MonteCarloRow> monte_carlo;

  std::string path(const ExpectedRow& row) const;
  std::string dir;
};

/// The benchmark corpus described by `<dir>/expected.json`.
std::vector<BenchmarkSpec> models(const std::string& dir = VREACH_MODELS_DIR);

const BenchmarkSpec& find_model(const std::vector<BenchmarkSpec>& all, const std::string& name);

/// Probability that the two-mode thermostat (cooling x' = -x until 18,
/// heating x' = 30 - x until 22, x(0) ~ N(mu, sigma), tau = 10 t) is in the
/// heating mode with x in `goal` at tau = tau_goal, using at most k jumps.
double oracle_t2(double tau_goal, const Interval& goal, double mu = 30, double sigma = 1, int k = 1 << 20);

/// Initial temperatures for which the condition of oracle_t2 holds, as
/// disjoint increasing intervals.
std::vector<Interval> oracle_t2_region(double tau_goal, const Interval& goal, int k = 1 << 20);

}  // namespace vreach
