#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "vreach/box.hpp"
#include "vreach/pdrh.hpp"
#include "vreach/program.hpp"
#include "vreach/taylor.hpp"

namespace vreach {

struct ReachConfig {
  int taylor_order = 5;
  double max_step = 0.05;    // largest ODE step
  double min_step = 1e-9;    // below this a step is an enclosure failure
  double step_tol = 1e-10;   // accepted remainder width per step, relative to max(1, |y|)
  int time_depth = 20;       // bisection depth of the goal check within a step
  int jump_depth = 20;       // bisection depth of the jump-time search within a step
  long max_segments = 200000;  // ODE steps per query (Zeno guard)
};

class EnclosureFailure : public Error {
 public:
  EnclosureFailure(double t, const std::string& msg) : Error(msg), time_(t) {}
  double time() const { return time_; }

 private:
  double time_;
};

enum class Verdict { Unsat, DeltaSat };
enum class CellClass { Zero, One, Mixed };
enum class FlowStatus { InvariantViolated, GuardEnabled, TimeExhausted, Inconclusive };

const char* to_string(Verdict v);
const char* to_string(CellClass c);

/// y' = f(y) over numbered state slots.
class OdeSystem {
 public:
  OdeSystem() = default;
  /// flows maps slot names to right-hand sides. Slots without a flow are
  /// constant, except `clock` (if given) which has derivative 1.
  OdeSystem(const std::vector<std::string>& names, const std::map<std::string, ExprPtr>& flows,
            const std::string& clock = "");

  std::size_t dim() const { return tp_.dim(); }
  const TaylorProgram& program() const { return tp_; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  TaylorProgram tp_;
};

/// One validated step: the Taylor expansion at the box midpoint, its
/// Jacobian over the box, the direct expansion over the box and the
/// Lagrange remainder over the a-priori enclosure. Evaluates the flow tube
/// on any sub-interval of [0, h].
class TaylorStep {
 public:
  double t0 = 0;  // mode-local start time
  double h = 0;

  std::vector<Interval> eval(const Interval& s) const;
  const std::vector<Interval>& start() const { return y0_; }
  const std::vector<Interval>& apriori() const { return b_; }

 private:
  friend class StepBuilder;
  int n_ = 0, p_ = 0;
  std::vector<Interval> y0_, dy_, r_, b_;
  std::vector<Interval> cm_;   // (p+1) x n, expansion at the midpoint
  std::vector<Interval> cy_;   // (p+1) x n, expansion over the box
  std::vector<Interval> jac_;  // (p+1) x n x n
};

struct FlowEnclosure {
  std::vector<Interval> times;               // segment time intervals
  std::vector<std::vector<Interval>> tubes;  // state box per segment
  std::vector<TaylorStep> steps;
  FlowStatus status = FlowStatus::Inconclusive;
  bool range_excursion = false;
  std::string message;
};

/// Narrows a state box to the points satisfying invariant and ranges;
/// returns false when nothing remains.
using Contractor = std::function<bool(std::vector<Interval>&)>;

/// Validated enclosure of all solutions starting in `init` up to local time
/// `horizon` or until `contract` empties the state. Throws EnclosureFailure.
FlowEnclosure ode_enclose(const OdeSystem& sys, std::vector<Interval> init, double horizon, const ReachConfig& cfg,
                          const Contractor& contract = {}, long* segments = nullptr);

/// Named-variable convenience form.
FlowEnclosure ode_enclose(const std::map<std::string, ExprPtr>& flow, const Box& init, const Interval& horizon,
                          const ReachConfig& cfg = {});

struct ReachStats {
  long segments = 0;
  long paths = 0;
  std::vector<std::string> warnings;
};

/// Bounded delta-reachability for one model. Immutable and shareable
/// between threads once built.
class Engine {
 public:
  Engine(const HybridModel& model, ReachConfig cfg = {});

  Verdict evaluate(const ReachQuery& q, ReachStats* stats = nullptr) const;
  CellClass classify(const Interval& cell, int k, double delta, ReachStats* stats = nullptr) const;

  const HybridModel& model() const { return model_; }
  const ReachConfig& config() const { return cfg_; }

 private:
  struct CompiledJump {
    PredEval guard;
    int target;
    Program reset;
    std::vector<std::pair<int, int>> assign;  // slot, program node
  };
  struct CompiledMode {
    int id;
    OdeSystem ode;
    PredEval invariant;
    std::vector<CompiledJump> jumps;
  };
  struct Search;

  const CompiledMode& mode(int id) const;
  bool contract_state(const CompiledMode& m, std::vector<Interval>& box, bool* excursion = nullptr) const;
  std::vector<bool> run(int init_mode, const std::vector<Interval>& init, int target_mode,
                        const std::vector<const PredEval*>& targets, int k, double delta, ReachStats* stats) const;

  HybridModel model_;
  ReachConfig cfg_;
  std::vector<std::string> names_;
  std::vector<Interval> ranges_;
  int time_slot_ = 0;
  double horizon_ = 0;
  std::vector<CompiledMode> modes_;
  PredEval goal_, goal_c_, init_;
};

}  // namespace vreach
