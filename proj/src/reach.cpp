#include "vreach/reach.hpp"

#include <optional>

namespace vreach {

using namespace rounding;

const char* to_string(Verdict v) { return v == Verdict::Unsat ? "unsat" : "delta-sat"; }

const char* to_string(CellClass c) {
  switch (c) {
    case CellClass::Zero: return "zero";
    case CellClass::One: return "one";
    case CellClass::Mixed: return "mixed";
  }
  return "?";
}

OdeSystem::OdeSystem(const std::vector<std::string>& names, const std::map<std::string, ExprPtr>& flows,
                     const std::string& clock)
    : names_(names) {
  if (names.size() > static_cast<std::size_t>(kMaxDim))
    throw Error("at most " + std::to_string(kMaxDim) + " state variables are supported");
  auto slot = [&](const std::string& n) -> int {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return static_cast<int>(i);
    throw Error("unbound variable '" + n + "' in flow");
  };
  Program prog;
  std::vector<int> outputs;
  for (const auto& n : names) {
    auto it = flows.find(n);
    if (it != flows.end()) {
      outputs.push_back(prog.compile(*it->second, slot));
    } else {
      outputs.push_back(prog.compile(*make_const(n == clock ? 1.0 : 0.0), slot));
    }
  }
  for (const auto& [n, e] : flows) slot(n);
  tp_ = TaylorProgram(prog, outputs);
}

namespace {

Interval horner(const std::vector<Interval>& c, std::size_t stride, std::size_t offset, int p, const Interval& s) {
  Interval acc = c[p * stride + offset];
  for (int k = p - 1; k >= 0; --k) acc = acc * s + c[k * stride + offset];
  return acc;
}

}  // namespace

std::vector<Interval> TaylorStep::eval(const Interval& s) const {
  const std::size_t n = n_;
  std::vector<Interval> out(n);
  const Interval sp = pow_int(s, p_ + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Interval rem = r_[i] * sp;
    const Interval direct = horner(cy_, n, i, p_, s) + rem;
    Interval mv = horner(cm_, n, i, p_, s) + rem;
    for (std::size_t l = 0; l < n; ++l) {
      if (dy_[l].is_thin() && dy_[l].lo() == 0) continue;
      mv += horner(jac_, n * n, i * n + l, p_, s) * dy_[l];
    }
    auto r = intersect(direct, mv);
    if (r) r = intersect(*r, b_[i]);
    if (!r) throw Error("inconsistent flow enclosure");
    out[i] = *r;
  }
  return out;
}

class StepBuilder {
 public:
  StepBuilder(const OdeSystem& sys, const ReachConfig& cfg) : sys_(sys), cfg_(cfg) {}

  // Builds a step from y with the largest step <= h meeting the tolerances.
  TaylorStep build(const std::vector<Interval>& y, double t0, double h) const {
    const int p = cfg_.taylor_order;
    const std::size_t n = sys_.dim();
    std::vector<Interval> b;
    std::vector<std::vector<Interval>> coef;
    const double requested = h;  // may itself be a sliver up to the horizon
    while (true) {
      if (h < cfg_.min_step && h < requested) throw EnclosureFailure(t0, "ODE step underflow at t = " + std::to_string(t0));
      if (!apriori(y, h, b)) {
        h /= 2;
        continue;
      }
      try {
        sys_.program().series<TaylorIntervalArith>(b, p + 1, coef);
      } catch (const DomainError&) {
        h /= 2;
        continue;
      }
      const Interval hp = pow_int(Interval(h), p + 1);
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        const double w = (coef[p + 1][i] * hp).mag();
        ok = w <= cfg_.step_tol * std::max(1.0, y[i].mag());
      }
      if (!ok && h / 2 >= cfg_.min_step * 1024) {
        h /= 2;
        continue;
      }
      break;
    }
    TaylorStep st;
    st.t0 = t0;
    st.h = h;
    st.n_ = static_cast<int>(n);
    st.p_ = p;
    st.y0_ = y;
    st.b_ = b;
    st.r_ = coef[p + 1];

    std::vector<Interval> m(n);
    st.dy_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = Interval(mid(y[i]));
      st.dy_[i] = y[i] - m[i];
    }
    std::vector<std::vector<Interval>> cm;
    sys_.program().series<TaylorIntervalArith>(m, p, cm);
    std::vector<Dual> yd(n);
    for (std::size_t i = 0; i < n; ++i) {
      yd[i].v = y[i];
      yd[i].n = static_cast<int>(n);
      yd[i].d[i] = Interval(1.0);
    }
    std::vector<std::vector<Dual>> cd;
    sys_.program().series<DualArith>(yd, p, cd);
    st.cm_.resize((p + 1) * n);
    st.cy_.resize((p + 1) * n);
    st.jac_.resize((p + 1) * n * n);
    for (int k = 0; k <= p; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        st.cm_[k * n + i] = cm[k][i];
        st.cy_[k * n + i] = cd[k][i].v;
        for (std::size_t l = 0; l < n; ++l)
          st.jac_[(k * n + i) * n + l] = l < static_cast<std::size_t>(cd[k][i].n) ? cd[k][i].d[l] : Interval(0.0);
      }
    }
    return st;
  }

 private:
  // Box b with y + [0,h] f(b) contained in b.
  bool apriori(const std::vector<Interval>& y, double h, std::vector<Interval>& b) const {
    const std::size_t n = y.size();
    const Interval H(0.0, h);
    std::vector<Interval> f;
    try {
      sys_.program().rhs(y, f);
    } catch (const DomainError&) {
      return false;
    }
    b.resize(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = y[i] + H * f[i];
    for (int it = 0; it < 12; ++it) {
      for (std::size_t i = 0; i < n; ++i) {
        const double w = 0.1 * width(b[i]) + 1e-14 * (1 + b[i].mag());
        b[i] = Interval(sub_down(b[i].lo(), w), add_up(b[i].hi(), w));
      }
      try {
        sys_.program().rhs(b, f);
      } catch (const DomainError&) {
        return false;
      }
      bool inside = true;
      std::vector<Interval> nb(n);
      for (std::size_t i = 0; i < n; ++i) {
        nb[i] = y[i] + H * f[i];
        if (!nb[i].is_finite()) return false;
        inside = inside && b[i].contains(nb[i]);
      }
      if (inside) {
        b = std::move(nb);
        return true;
      }
      for (std::size_t i = 0; i < n; ++i) b[i] = hull(b[i], nb[i]);
    }
    return false;
  }

  const OdeSystem& sys_;
  const ReachConfig& cfg_;
};

FlowEnclosure ode_enclose(const OdeSystem& sys, std::vector<Interval> y, double horizon, const ReachConfig& cfg,
                          const Contractor& contract, long* segments) {
  FlowEnclosure fe;
  for (const auto& v : y)
    if (!v.is_finite()) throw EnclosureFailure(0, "unbounded initial state");
  if (contract && !contract(y)) {
    fe.status = FlowStatus::InvariantViolated;
    return fe;
  }
  if (horizon <= 0) {
    fe.times.push_back(Interval(0.0));
    fe.tubes.push_back(y);
    fe.status = FlowStatus::TimeExhausted;
    return fe;
  }
  const StepBuilder builder(sys, cfg);
  double t = 0;
  while (t < horizon) {
    if (segments && ++*segments > cfg.max_segments)
      throw EnclosureFailure(t, "segment budget exhausted (possible Zeno behaviour)");
    const double h = std::min(cfg.max_step, horizon - t);
    TaylorStep st = builder.build(y, t, h);
    std::vector<Interval> tube = st.eval(Interval(0.0, st.h));
    if (contract && !contract(tube)) {
      fe.status = FlowStatus::InvariantViolated;
      break;
    }
    std::vector<Interval> end = st.eval(Interval(st.h));
    fe.times.push_back(Interval(t, add_up(t, st.h)));
    fe.tubes.push_back(std::move(tube));
    fe.steps.push_back(std::move(st));
    t += fe.steps.back().h;
    if (contract && !contract(end)) {
      fe.status = FlowStatus::InvariantViolated;
      break;
    }
    y = std::move(end);
  }
  if (t >= horizon) fe.status = FlowStatus::TimeExhausted;
  return fe;
}

FlowEnclosure ode_enclose(const std::map<std::string, ExprPtr>& flow, const Box& init, const Interval& horizon,
                          const ReachConfig& cfg) {
  std::vector<std::string> names;
  std::vector<Interval> y;
  for (const auto& [name, x] : init) {
    names.push_back(name);
    y.push_back(x);
  }
  const OdeSystem sys(names, flow);
  return ode_enclose(sys, y, horizon.hi(), cfg);
}

Engine::Engine(const HybridModel& model, ReachConfig cfg) : model_(model), cfg_(cfg) {
  names_ = model_.state_names();
  for (const auto& v : model_.vars) ranges_.push_back(v.range);
  for (std::size_t i = 0; i < model_.randoms.size(); ++i) ranges_.push_back(Interval::entire());
  time_slot_ = model_.time_slot();
  horizon_ = ranges_[time_slot_].hi();
  if (!std::isfinite(horizon_)) throw Error("time range must be bounded");
  const SlotFn slot = [this](const std::string& n) { return model_.slot(n); };
  for (const auto& md : model_.modes) {
    CompiledMode cm;
    cm.id = md.id;
    std::map<std::string, ExprPtr> flows;
    for (const auto& f : md.flows) flows[f.var] = f.rhs;
    cm.ode = OdeSystem(names_, flows, "time");
    cm.invariant = PredEval(md.invariant(), slot);
    for (const auto& j : md.jumps) {
      CompiledJump cj;
      cj.guard = PredEval(j.guard, slot);
      cj.target = j.target;
      for (const auto& a : j.assignments) cj.assign.emplace_back(slot(a.var), cj.reset.compile(*a.rhs, slot));
      cm.jumps.push_back(std::move(cj));
    }
    modes_.push_back(std::move(cm));
  }
  goal_ = PredEval(model_.goal.pred, slot);
  goal_c_ = PredEval(model_.goal_c.pred, slot);
  init_ = PredEval(model_.init.pred, slot);
}

const Engine::CompiledMode& Engine::mode(int id) const {
  for (const auto& m : modes_)
    if (m.id == id) return m;
  throw Error("no mode " + std::to_string(id));
}

bool Engine::contract_state(const CompiledMode& m, std::vector<Interval>& box, bool* excursion) const {
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (excursion && !ranges_[i].contains(box[i])) *excursion = true;
    auto r = intersect(box[i], ranges_[i]);
    if (!r) return false;
    box[i] = *r;
  }
  return m.invariant.is_true() || m.invariant.contract(box, 0.0);
}

struct Engine::Search {
  const Engine& e;
  int target_mode;
  const std::vector<const PredEval*>& targets;
  int k;
  double delta;
  ReachStats* stats;
  std::vector<bool> sat;
  long segments = 0;
  int open;

  bool done() const { return open == 0; }

  void mark_all(const std::string& why) {
    for (std::size_t i = 0; i < sat.size(); ++i) sat[i] = true;
    open = 0;
    if (stats) stats->warnings.push_back(why);
  }

  void explore(int mode_id, std::vector<Interval> box, int depth) {
    const CompiledMode& m = e.mode(mode_id);
    if (!e.contract_state(m, box)) return;
    const bool is_target = mode_id == target_mode;
    if (!is_target && depth >= k) return;
    FlowEnclosure fe;
    try {
      const Contractor c = [&](std::vector<Interval>& b) { return e.contract_state(m, b); };
      fe = ode_enclose(m.ode, box, e.horizon_, e.cfg_, c, &segments);
    } catch (const Error& err) {
      mark_all(std::string("enclosure failure in mode ") + std::to_string(mode_id) + ": " + err.what());
      return;
    }
    if (stats) ++stats->paths;
    if (is_target) {
      for (std::size_t i = 0; i < targets.size(); ++i) {
        if (sat[i]) continue;
        if (target_hit(m, fe, *targets[i])) {
          sat[i] = true;
          if (--open == 0) return;
        }
      }
    }
    if (depth >= k) return;
    for (const auto& j : m.jumps) {
      for (auto& succ : successors(m, fe, j)) {
        explore(j.target, std::move(succ), depth + 1);
        if (done()) return;
      }
    }
  }

  bool target_hit(const CompiledMode& m, const FlowEnclosure& fe, const PredEval& target) const {
    for (std::size_t j = 0; j < fe.steps.size(); ++j) {
      if (target.eval(fe.tubes[j], delta) == Truth::False) continue;
      if (refine_target(m, fe.steps[j], Interval(0.0, fe.steps[j].h), 0, target)) return true;
    }
    return false;
  }

  bool refine_target(const CompiledMode& m, const TaylorStep& st, const Interval& s, int depth,
                     const PredEval& target) const {
    std::vector<Interval> box = st.eval(s);
    if (!e.contract_state(m, box)) return false;
    const Truth t = target.eval(box, delta);
    if (t == Truth::False) return false;
    if (t == Truth::True) return true;
    if (!target.contract(box, delta)) return false;
    if (depth >= e.cfg_.time_depth) return true;
    std::pair<Interval, Interval> halves;
    try {
      halves = bisect(s);
    } catch (const CannotSplit&) {
      return true;
    }
    return refine_target(m, st, halves.first, depth + 1, target) ||
           refine_target(m, st, halves.second, depth + 1, target);
  }

  // Box over s consistent with invariant, ranges and guard, if any.
  std::optional<std::vector<Interval>> guard_box(const CompiledMode& m, const TaylorStep& st, const Interval& s,
                                                 const CompiledJump& j) const {
    std::vector<Interval> box = st.eval(s);
    if (!e.contract_state(m, box)) return std::nullopt;
    if (j.guard.eval(box, 0.0) == Truth::False) return std::nullopt;
    if (!j.guard.contract(box, 0.0)) return std::nullopt;
    return box;
  }

  // Leftmost (or rightmost) dyadic leaf of [0,h] where the guard may hold.
  std::optional<Interval> extreme_leaf(const CompiledMode& m, const TaylorStep& st, const Interval& s, int depth,
                                       const CompiledJump& j, bool left) const {
    if (!guard_box(m, st, s, j)) return std::nullopt;
    if (depth >= e.cfg_.jump_depth) return s;
    std::pair<Interval, Interval> halves;
    try {
      halves = bisect(s);
    } catch (const CannotSplit&) {
      return s;
    }
    const Interval& first = left ? halves.first : halves.second;
    const Interval& second = left ? halves.second : halves.first;
    if (auto r = extreme_leaf(m, st, first, depth + 1, j, left)) return r;
    return extreme_leaf(m, st, second, depth + 1, j, left);
  }

  // Canonical dyadic cover of `window` inside node s.
  void cover(const Interval& s, const Interval& window, int depth, std::vector<Interval>& out) const {
    if (s.hi() < window.lo() || s.lo() > window.hi()) return;
    if (window.contains(s) || depth >= e.cfg_.jump_depth) {
      out.push_back(s);
      return;
    }
    std::pair<Interval, Interval> halves;
    try {
      halves = bisect(s);
    } catch (const CannotSplit&) {
      out.push_back(s);
      return;
    }
    cover(halves.first, window, depth + 1, out);
    cover(halves.second, window, depth + 1, out);
  }

  std::optional<std::vector<Interval>> step_successor(const CompiledMode& m, const TaylorStep& st,
                                                      const std::vector<Interval>& tube,
                                                      const CompiledJump& j) const {
    if (j.guard.eval(tube, 0.0) == Truth::False) return std::nullopt;
    const Interval whole(0.0, st.h);
    const auto lo = extreme_leaf(m, st, whole, 0, j, true);
    if (!lo) return std::nullopt;
    const auto hi = extreme_leaf(m, st, whole, 0, j, false);
    const Interval window(lo->lo(), hi->hi());
    std::vector<Interval> pieces;
    cover(whole, window, 0, pieces);
    std::optional<std::vector<Interval>> acc;
    for (const auto& p : pieces) {
      auto b = guard_box(m, st, p, j);
      if (!b) continue;
      if (!acc) {
        acc = std::move(b);
      } else {
        for (std::size_t i = 0; i < b->size(); ++i) (*acc)[i] = hull((*acc)[i], (*b)[i]);
      }
    }
    return acc;
  }

  std::vector<Interval> apply_reset(const CompiledJump& j, const std::vector<Interval>& pre) const {
    std::vector<Interval> post = pre;
    if (!j.assign.empty()) {
      std::vector<Interval> val;
      j.reset.run<Interval, IntervalArith>(pre, val);
      for (const auto& [slot, node] : j.assign) post[slot] = val[node];
    }
    post[e.time_slot_] = Interval(0.0);
    return post;
  }

  std::vector<std::vector<Interval>> successors(const CompiledMode& m, const FlowEnclosure& fe,
                                                const CompiledJump& j) const {
    std::vector<std::vector<Interval>> out;
    std::optional<std::vector<Interval>> cur;
    auto flush = [&] {
      if (cur) out.push_back(apply_reset(j, *cur));
      cur.reset();
    };
    for (std::size_t s = 0; s < fe.steps.size(); ++s) {
      auto b = step_successor(m, fe.steps[s], fe.tubes[s], j);
      if (!b) {
        flush();
        continue;
      }
      if (!cur) {
        cur = std::move(b);
      } else {
        for (std::size_t i = 0; i < b->size(); ++i) (*cur)[i] = hull((*cur)[i], (*b)[i]);
      }
    }
    flush();
    return out;
  }
};

std::vector<bool> Engine::run(int init_mode, const std::vector<Interval>& init, int target_mode,
                              const std::vector<const PredEval*>& targets, int k, double delta,
                              ReachStats* stats) const {
  Search s{*this, target_mode, targets, k, delta, stats, std::vector<bool>(targets.size(), false), 0,
           static_cast<int>(targets.size())};
  try {
    s.explore(init_mode, init, 0);
  } catch (const Error& err) {
    s.mark_all(std::string("reach failure: ") + err.what());
  }
  if (stats) stats->segments += s.segments;
  return s.sat;
}

Verdict Engine::evaluate(const ReachQuery& q, ReachStats* stats) const {
  if (q.init_empty) return Verdict::Unsat;
  const PredEval target(*q.target, [this](const std::string& n) { return model_.slot(n); });
  const auto r = run(q.init_mode, q.init, q.target_mode, {&target}, q.k, q.delta, stats);
  return r[0] ? Verdict::DeltaSat : Verdict::Unsat;
}

CellClass Engine::classify(const Interval& cell, int k, double delta, ReachStats* stats) const {
  std::vector<Interval> box = ranges_;
  box[names_.size() - 1] = cell;
  box[time_slot_] = Interval(0.0);
  if (!init_.contract(box, 0.0)) return CellClass::Zero;
  const auto r = run(model_.init.mode, box, model_.goal.mode, {&goal_, &goal_c_}, k, delta, stats);
  if (!r[0]) return CellClass::Zero;
  if (!r[1]) return CellClass::One;
  return CellClass::Mixed;
}

}  // namespace vreach
