#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vreach/error.hpp"
#include "vreach/expr.hpp"
#include "vreach/interval.hpp"

namespace vreach {

class PdrhError : public Error {
 public:
  enum class Kind {
    Syntax,
    UndeclaredVariable,
    DuplicateDeclaration,
    DuplicateMode,
    UnknownMode,
    MissingFlow,
    DuplicateFlow,
    MissingTime,
    MissingInit,
    MissingGoal,
    MissingGoalC,
    GoalModeMismatch,
    UnsupportedReset,
    UnknownDistribution,
    InvalidDistribution,
    MissingRandom,
    Unsupported,
  };

  PdrhError(Kind kind, const std::string& msg, int line = 0, int column = 0);

  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  Kind kind_;
  int line_;
  int column_;
};

const char* kind_name(PdrhError::Kind k);

struct VarDecl {
  std::string name;
  ExprPtr lo, hi;
  Interval range;  // outer enclosure of [lo, hi]
  int line = 0;
};

/// A distribution declaration as written, e.g. `N(30, 1) x;`.
struct RandomDecl {
  std::string dist;
  std::vector<ExprPtr> args;
  std::string name;
  int line = 0, column = 0;
};

struct FlowEq {
  std::string var;
  ExprPtr rhs;
  int line = 0;
};

struct Assignment {
  std::string var;  // unprimed name
  ExprPtr rhs;      // over pre-jump values
};

struct Jump {
  Pred guard;
  int target = 0;
  Pred reset;  // as written
  std::vector<Assignment> assignments;
  int line = 0;
};

struct Mode {
  int id = 0;
  std::vector<Pred> invariants;
  std::vector<FlowEq> flows;
  std::vector<Jump> jumps;
  int line = 0;

  Pred invariant() const { return Pred::all(invariants); }
  const FlowEq* flow(const std::string& var) const;
};

struct ModalPred {
  int mode = 0;
  Pred pred;
  int line = 0;
};

/// Parsed and validated model. Immutable after parse().
struct HybridModel {
  std::vector<std::pair<std::string, std::string>> defines;  // name, body text
  std::vector<VarDecl> vars;
  std::vector<RandomDecl> randoms;
  std::vector<Mode> modes;
  ModalPred init;
  ModalPred goal;
  ModalPred goal_c;

  const Mode& mode(int id) const;
  /// State layout shared by every compiled program: declared variables in
  /// declaration order, then the random parameters.
  std::vector<std::string> state_names() const;
  int slot(const std::string& name) const;  // throws for unknown names
  int time_slot() const { return slot("time"); }
};

HybridModel parse(const std::string& text);
HybridModel parse_file(const std::string& path);

/// Canonical PDRH text. parse(print(m)) is structurally equal to m.
std::string print(const HybridModel& m);
bool equal(const HybridModel& a, const HybridModel& b);

/// Query handed to the reachability engine for one parameter cell.
struct ReachQuery {
  const HybridModel* model = nullptr;
  int init_mode = 0;
  std::vector<Interval> init;  // per state slot
  bool init_empty = false;     // init predicate unsatisfiable on the cell
  int target_mode = 0;
  const Pred* target = nullptr;
  int k = 0;
  double delta = 1e-3;
};

/// Returns the goal query and the goal-complement query for a parameter cell.
std::pair<ReachQuery, ReachQuery> instantiate(const HybridModel& m, const Interval& cell, int k = 0,
                                              double delta = 1e-3);

}  // namespace vreach
