#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "vreach/density.hpp"
#include "vreach/pdrh.hpp"
#include "vreach/program.hpp"

namespace vreach {

/// N = ceil(ln(1/(1-c)) / (2 zeta^2)).
std::uint64_t chernoff_size(double zeta, double confidence);

/// Inverse of the standard normal CDF (Wichura, AS241), |error| < 1e-15.
double normal_quantile(double p);

/// Draws a value from the distribution by inversion (rejection for pdf(...)).
double sample(const Distribution& d, std::mt19937_64& gen);

struct SimResult {
  bool reached = false;
  int jumps = 0;
  int mode = 0;
  double time = 0;                // mode-local time at the end or at the goal
  std::vector<double> state;      // state at the end or at the goal
};

/// Fixed-step RK4 simulation with sign-change event location; jumps are
/// taken as soon as a guard holds (urgent semantics). Not validated: an event
/// that starts and ends within one step can be missed.
class Simulator {
 public:
  explicit Simulator(const HybridModel& model);

  /// Runs the system with the random parameter set to r for at most k jumps.
  /// `observe` (optional) sees (mode, local time, state) after every step.
  SimResult run(double r, int k, double step,
                const std::function<void(int, double, const std::vector<double>&)>& observe = {}) const;

  const HybridModel& model() const { return model_; }

 private:
  struct SimJump {
    PredEval guard;
    int target;
    Program reset;
    std::vector<std::pair<int, int>> assign;
  };
  struct SimMode {
    int id;
    Program flow;
    std::vector<int> out;  // node per slot, -1 constant, -2 clock
    PredEval invariant;
    std::vector<SimJump> jumps;
  };

  const SimMode& mode(int id) const;
  void deriv(const SimMode& m, const std::vector<double>& y, std::vector<double>& dy) const;
  std::vector<double> rk4(const SimMode& m, const std::vector<double>& y, double h) const;
  bool admissible(const SimMode& m, const std::vector<double>& y) const;

  HybridModel model_;
  std::size_t n_ = 0;
  int time_slot_ = 0;
  int random_slot_ = 0;
  double horizon_ = 0;
  std::vector<Interval> ranges_;
  std::vector<SimMode> modes_;
  PredEval goal_, init_;
};

struct MCConfig {
  double zeta = 5e-3;
  double confidence = 0.99;
  std::uint64_t seed = 1;
  int k = 0;
  double step = 1e-3;
  std::uint64_t max_samples = 100000000;
  int workers = 1;
  void validate() const;
};

struct MCResult {
  double p_hat = 0;
  Interval ci{0.0, 1.0};
  std::uint64_t n_used = 0;
  std::uint64_t successes = 0;
};

/// Samples of block b come from mt19937_64 seeded with the seed_seq of the
/// 32-bit halves of seed and b.
inline constexpr std::uint64_t kSampleBlock = 4096;

MCResult estimate(const HybridModel& model, const MCConfig& cfg);

}  // namespace vreach
