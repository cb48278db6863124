#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vreach/density.hpp"
#include "vreach/integrator.hpp"
#include "vreach/reach.hpp"

namespace vreach {

struct SolverConfig {
  double epsilon = 1e-3;
  double t = 0.5;  // share of epsilon given to the tails
  int k = 0;
  double delta = 1e-3;
  int workers = 1;
  std::optional<double> timeout;  // seconds
  double min_cell_width = 0;       // 0: 0.01 * epsilon * width of the tail domain
  double min_cell_mass = 0;        // 0: eps_prob / 1024
  std::vector<double> delta_schedule;  // empty: delta/10, ..., delta/1e4
  std::size_t split_target = 8;        // pre-bisect small Mixed rounds up to this many cells
  ReachConfig reach;

  double eps_inf() const { return t * epsilon; }
  double eps_prob() const { return (1 - t) * epsilon; }
  void validate() const;
};

/// Where the probability mass of the partition stands.
struct MassAccount {
  Interval one{0.0};      // cells classified One
  Interval zero{0.0};     // cells classified Zero
  Interval pending{0.0};  // cells still to classify, or stuck
  Interval domain{0.0};   // initial partition of the tail-bounded domain
  double tail = 0;        // certified mass outside the domain
};

struct ProgressEvent {
  double elapsed_s = 0;
  double p_lower = 0;
  double p_upper = 1;
  long cells_done = 0;
  long cells_pending = 0;
  MassAccount masses;
};

using ProgressSink = std::function<void(const ProgressEvent&)>;

struct WorkCell {
  Interval cell;
  Interval mass;
  int delta_index = 0;
};

struct SolverStats {
  long rounds = 0;
  long classified = 0;
  long zero = 0, one = 0, mixed = 0;
  long segments = 0;
  std::vector<std::string> warnings;
};

struct ProbabilityEnclosure {
  Interval p_lower{0.0};
  Interval p_upper{1.0};
  Interval reported{0.0, 1.0};
  bool complete = false;
  bool timed_out = false;
  Interval domain{0.0};
  double tail = 0;
  std::vector<Interval> stuck;  // Mixed cells left at the width floor
  SolverStats stats;
};

/// Splits every cell wider than min_width (re-integrating each half at
/// `rate`) until there are at least `target` cells or nothing can split.
std::vector<WorkCell> presplit(std::vector<WorkCell> cells, std::size_t target, double min_width,
                               const Distribution& d, double rate);

/// Classifies cells on up to `workers` threads. Entries are empty for cells
/// skipped after `stop` became true. Results are in cell order.
std::vector<std::optional<CellClass>> schedule(const std::vector<WorkCell>& cells,
                                               const std::function<CellClass(const WorkCell&)>& classify,
                                               int workers, const std::function<bool()>& stop = {});

ProbabilityEnclosure solve(const HybridModel& model, const SolverConfig& cfg, const ProgressSink& progress = {});

}  // namespace vreach
