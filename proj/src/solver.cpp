#include "vreach/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

namespace vreach {

using namespace rounding;

void SolverConfig::validate() const {
  if (!(epsilon > 0 && epsilon <= 1)) throw Error("epsilon must lie in (0, 1]");
  if (!(t > 0 && t < 1)) throw Error("t must lie in (0, 1)");
  if (k < 0) throw Error("k must be nonnegative");
  if (!(delta > 0)) throw Error("delta must be positive");
  if (workers < 1) throw Error("worker count must be positive");
  if (timeout && !(*timeout > 0)) throw Error("timeout must be positive");
  if (min_cell_width < 0 || min_cell_mass < 0) throw Error("cell floors must be nonnegative");
  double prev = delta;
  for (double d : delta_schedule) {
    if (!(d > 0 && d < prev)) throw Error("delta schedule must be positive and decreasing below delta");
    prev = d;
  }
}

namespace {

std::vector<WorkCell> split_cell(const WorkCell& w, const Distribution& d, double rate) {
  const auto [l, r] = bisect(w.cell);
  std::vector<WorkCell> out;
  for (const auto& half : {l, r})
    for (const auto& pc : partition_rate(d, half, rate)) out.push_back({pc.cell, pc.mass, w.delta_index});
  return out;
}

bool splittable(const WorkCell& w, double min_width) {
  if (w.cell.is_thin() || w.cell.hi() - w.cell.lo() <= min_width) return false;
  return next_up(w.cell.lo()) < w.cell.hi();
}

}  // namespace

std::vector<WorkCell> presplit(std::vector<WorkCell> cells, std::size_t target, double min_width,
                               const Distribution& d, double rate) {
  while (!cells.empty() && cells.size() < target) {
    std::vector<WorkCell> next;
    bool any = false;
    for (const auto& w : cells) {
      if (splittable(w, min_width)) {
        auto parts = split_cell(w, d, rate);
        next.insert(next.end(), parts.begin(), parts.end());
        any = true;
      } else {
        next.push_back(w);
      }
    }
    cells = std::move(next);
    if (!any) break;
  }
  return cells;
}

std::vector<std::optional<CellClass>> schedule(const std::vector<WorkCell>& cells,
                                               const std::function<CellClass(const WorkCell&)>& classify,
                                               int workers, const std::function<bool()>& stop) {
  std::vector<std::optional<CellClass>> out(cells.size());
  if (cells.empty()) return out;
  const std::size_t n = std::min<std::size_t>(std::max(workers, 1), cells.size());
  if (n == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (stop && stop()) break;
      out[i] = classify(cells[i]);
    }
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    while (!failed) {
      const std::size_t i = next++;
      if (i >= cells.size()) return;
      if (stop && stop()) return;
      try {
        out[i] = classify(cells[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < n; ++i) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return out;
}

ProbabilityEnclosure solve(const HybridModel& model, const SolverConfig& cfg, const ProgressSink& progress) {
  cfg.validate();
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };
  std::function<bool()> stop;
  if (cfg.timeout) {
    const double limit = *cfg.timeout;
    stop = [&elapsed, limit] { return elapsed() > limit; };
  }

  std::vector<double> deltas{cfg.delta};
  if (cfg.delta_schedule.empty()) {
    for (int i = 1; i <= 4; ++i) deltas.push_back(cfg.delta * std::pow(10.0, -i));
  } else {
    deltas.insert(deltas.end(), cfg.delta_schedule.begin(), cfg.delta_schedule.end());
  }

  const Distribution dist(extract_random(model));
  const Engine engine(model, cfg.reach);
  const TailBounds tb = dist.tail_bounds(cfg.eps_inf());
  const double dw = width(tb.domain);
  const double rate = div_down(cfg.eps_prob(), dw);
  const double min_width = cfg.min_cell_width > 0 ? cfg.min_cell_width : 0.01 * cfg.epsilon * dw;
  const double min_mass = cfg.min_cell_mass > 0 ? cfg.min_cell_mass : cfg.eps_prob() / 1024;

  ProbabilityEnclosure res;
  res.domain = tb.domain;
  res.tail = tb.tail;

  std::vector<WorkCell> pending;
  Interval total(0.0);
  if (!tb.domain.is_thin()) {
    for (const auto& pc : partition(dist, tb.domain, cfg.eps_prob())) {
      pending.push_back({pc.cell, pc.mass, 0});
      total += pc.mass;
    }
  }
  const double leftover = std::max(0.0, std::min(tb.tail, sub_up(1.0, total.lo())));

  Interval lower(0.0);
  Interval upper = total;
  Interval zero_mass(0.0), stuck_mass(0.0);
  auto reported = [&] {
    const double lo = std::clamp(lower.lo(), 0.0, 1.0);
    const double hi = std::clamp(add_up(upper.hi(), leftover), lo, 1.0);
    return Interval(lo, hi);
  };
  res.reported = reported();
  std::set<std::string> warned;

  auto classify = [&](const WorkCell& w) {
    ReachStats st;
    const CellClass c = engine.classify(w.cell, cfg.k, deltas[w.delta_index], &st);
    return std::make_pair(c, st);
  };

  while (!pending.empty() && width(res.reported) > cfg.epsilon) {
    if (stop && stop()) {
      res.timed_out = true;
      break;
    }
    if (res.stats.rounds > 0) pending = presplit(std::move(pending), cfg.split_target, min_width, dist, rate);
    ++res.stats.rounds;

    std::vector<ReachStats> cell_stats(pending.size());
    const auto verdicts = schedule(
        pending,
        [&](const WorkCell& w) {
          auto [c, st] = classify(w);
          cell_stats[&w - pending.data()] = std::move(st);
          return c;
        },
        cfg.workers, stop);

    std::vector<WorkCell> next;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      const WorkCell& w = pending[i];
      if (!verdicts[i]) {
        next.push_back(w);
        res.timed_out = true;
        continue;
      }
      ++res.stats.classified;
      res.stats.segments += cell_stats[i].segments;
      for (const auto& msg : cell_stats[i].warnings)
        if (warned.insert(msg).second) res.stats.warnings.push_back(msg);
      switch (*verdicts[i]) {
        case CellClass::One:
          ++res.stats.one;
          lower += w.mass;
          break;
        case CellClass::Zero:
          ++res.stats.zero;
          upper -= w.mass;
          zero_mass += w.mass;
          break;
        case CellClass::Mixed:
          ++res.stats.mixed;
          if (!res.timed_out && w.mass.hi() > min_mass && splittable(w, min_width)) {
            auto parts = split_cell(w, dist, rate);
            next.insert(next.end(), parts.begin(), parts.end());
          } else if (w.delta_index + 1 < static_cast<int>(deltas.size())) {
            next.push_back({w.cell, w.mass, w.delta_index + 1});
          } else {
            res.stuck.push_back(w.cell);
            stuck_mass += w.mass;
          }
          break;
      }
    }
    pending = std::move(next);

    const Interval rep = reported();
    if (!(rep == res.reported) && progress) {
      MassAccount acc{lower, zero_mass, stuck_mass, total, tb.tail};
      for (const auto& w : pending) acc.pending += w.mass;
      progress({elapsed(), rep.lo(), rep.hi(), res.stats.classified, static_cast<long>(pending.size()), acc});
    }
    res.reported = rep;
    if (res.timed_out) break;
  }

  res.p_lower = lower;
  res.p_upper = Interval(std::min(upper.lo(), add_up(upper.hi(), leftover)), add_up(upper.hi(), leftover));
  res.reported = reported();
  res.complete = width(res.reported) <= cfg.epsilon;
  return res;
}

}  // namespace vreach
