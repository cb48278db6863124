#include "vreach/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace vreach {

std::uint64_t chernoff_size(double zeta, double confidence) {
  if (!(zeta > 0 && zeta < 1)) throw Error("zeta must lie in (0, 1)");
  if (!(confidence > 0 && confidence < 1)) throw Error("confidence must lie in (0, 1)");
  const long double z = zeta;
  const long double x = -std::log1p(-static_cast<long double>(confidence)) / (2 * z * z);
  // absorb the rounding noise of exact quotients such as 1/0.5
  const long double n = std::ceil(x - x * 1e-13L);
  if (n > 1.8e19L) throw Error("sample size overflows");
  return n < 1 ? 1 : static_cast<std::uint64_t>(n);
}

double normal_quantile(double p) {
  if (!(p > 0 && p < 1)) throw DomainError("normal quantile needs 0 < p < 1");
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r + 6.7265770927008700853e+4) * r +
                4.5921953931549871457e+4) * r + 1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r + 3.9307895800092710610e+4) * r +
                2.1213794301586595867e+4) * r + 5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
  }
  double r = q < 0 ? p : 1 - p;
  r = std::sqrt(-std::log(r));
  double v;
  if (r <= 5) {
    r -= 1.6;
    v = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r + 2.41780725177450611770e-1) * r +
             1.27045825245236838258e0) * r + 3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
          4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r + 1.51986665636164571966e-2) * r +
             1.48103976427480074590e-1) * r + 6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
          2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5;
    v = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 1.24266094738807843860e-3) * r +
             2.65321895265761230930e-2) * r + 2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
          5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r + 1.84631831751005468180e-5) * r +
             7.86869131145613259100e-4) * r + 1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0 ? -v : v;
}

namespace {

// uniform on the open interval (0, 1)
double open_unit(std::mt19937_64& gen) { return (static_cast<double>(gen() >> 11) + 0.5) * 0x1p-53; }

}  // namespace

double sample(const Distribution& d, std::mt19937_64& gen) {
  const auto& s = d.spec();
  switch (s.kind) {
    case DistributionSpec::Kind::Normal: return s.p1d + s.p2d * normal_quantile(open_unit(gen));
    case DistributionSpec::Kind::Uniform: return s.p1d + (s.p2d - s.p1d) * open_unit(gen);
    case DistributionSpec::Kind::Exponential: return -std::log1p(-open_unit(gen)) / s.p1d;
    case DistributionSpec::Kind::UserPdf: {
      const Interval sup = d.support();
      if (!sup.is_finite()) throw Error("sampling needs a bounded pdf support");
      const double top = d.pdf(sup).hi();
      if (!(top > 0) || !std::isfinite(top)) throw Error("cannot bound the density for rejection sampling");
      for (;;) {
        const double x = sup.lo() + (sup.hi() - sup.lo()) * open_unit(gen);
        if (open_unit(gen) * top <= d.pdf_point(x)) return x;
      }
    }
  }
  throw Error("unknown distribution");
}

Simulator::Simulator(const HybridModel& model) : model_(model) {
  const auto names = model_.state_names();
  n_ = names.size();
  time_slot_ = model_.time_slot();
  if (model_.randoms.size() != 1) throw Error("simulation needs exactly one random parameter");
  random_slot_ = model_.slot(model_.randoms[0].name);
  for (const auto& v : model_.vars) ranges_.push_back(v.range);
  ranges_.push_back(Interval::entire());
  horizon_ = ranges_[time_slot_].hi();
  const SlotFn slot = [this](const std::string& n) { return model_.slot(n); };
  for (const auto& md : model_.modes) {
    SimMode sm;
    sm.id = md.id;
    sm.out.assign(n_, -1);
    sm.out[time_slot_] = -2;
    for (const auto& f : md.flows) sm.out[slot(f.var)] = sm.flow.compile(*f.rhs, slot);
    sm.invariant = PredEval(md.invariant(), slot);
    for (const auto& j : md.jumps) {
      SimJump sj;
      sj.guard = PredEval(j.guard, slot);
      sj.target = j.target;
      for (const auto& a : j.assignments) sj.assign.emplace_back(slot(a.var), sj.reset.compile(*a.rhs, slot));
      sm.jumps.push_back(std::move(sj));
    }
    modes_.push_back(std::move(sm));
  }
  goal_ = PredEval(model_.goal.pred, slot);
  init_ = PredEval(model_.init.pred, slot);
}

const Simulator::SimMode& Simulator::mode(int id) const {
  for (const auto& m : modes_)
    if (m.id == id) return m;
  throw Error("no mode " + std::to_string(id));
}

void Simulator::deriv(const SimMode& m, const std::vector<double>& y, std::vector<double>& dy) const {
  thread_local std::vector<double> val;
  m.flow.run<double, DoubleArith>(y, val);
  dy.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) dy[i] = m.out[i] >= 0 ? val[m.out[i]] : (m.out[i] == -2 ? 1.0 : 0.0);
}

std::vector<double> Simulator::rk4(const SimMode& m, const std::vector<double>& y, double h) const {
  thread_local std::vector<double> k1, k2, k3, k4, t;
  t.resize(n_);
  deriv(m, y, k1);
  for (std::size_t i = 0; i < n_; ++i) t[i] = y[i] + 0.5 * h * k1[i];
  deriv(m, t, k2);
  for (std::size_t i = 0; i < n_; ++i) t[i] = y[i] + 0.5 * h * k2[i];
  deriv(m, t, k3);
  for (std::size_t i = 0; i < n_; ++i) t[i] = y[i] + h * k3[i];
  deriv(m, t, k4);
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = y[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return out;
}

bool Simulator::admissible(const SimMode& m, const std::vector<double>& y) const {
  for (std::size_t i = 0; i < n_; ++i)
    if (!ranges_[i].contains(y[i])) return false;
  return m.invariant.holds(y, 0.0);
}

namespace {

constexpr double kEqTol = 1e-9;
constexpr int kBisect = 80;

// Smallest s in (lo, hi] with pred(s), given !pred(lo) and pred(hi).
template <class F>
double first_true(double lo, double hi, const F& pred) {
  for (int i = 0; i < kBisect && lo < hi; ++i) {
    const double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    (pred(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

SimResult Simulator::run(double r, int k, double step,
                         const std::function<void(int, double, const std::vector<double>&)>& observe) const {
  if (!(step > 0)) throw Error("simulation step must be positive");
  std::vector<Interval> box = ranges_;
  box[random_slot_] = Interval(r);
  box[time_slot_] = Interval(0.0);
  SimResult res;
  res.mode = model_.init.mode;
  if (!init_.contract(box, 0.0)) return res;
  std::vector<double> y(n_);
  for (std::size_t i = 0; i < n_; ++i) y[i] = box[i].is_finite() ? mid(box[i]) : 0.0;
  y[random_slot_] = r;

  const int goal_mode = model_.goal.mode;
  auto goal_at = [&](const std::vector<double>& s) { return goal_.holds(s, kEqTol); };
  auto finish = [&](const std::vector<double>& s, bool hit) {
    res.reached = hit;
    res.time = s[time_slot_];
    res.state = s;
    return res;
  };

  for (;;) {
    const SimMode& m = mode(res.mode);
    if (!admissible(m, y)) return finish(y, false);
    if (res.mode == goal_mode && goal_at(y)) return finish(y, true);
    for (;;) {
      const double t = y[time_slot_];
      if (t >= horizon_) return finish(y, false);
      const double h = std::min(step, horizon_ - t);
      std::vector<double> y1 = rk4(m, y, h);
      const auto at = [&](double s) { return s >= h ? y1 : rk4(m, y, s); };

      // earliest enabled jump in (0, h]
      double s_jump = h + 1;
      const SimJump* jump = nullptr;
      if (res.jumps < k) {
        for (const auto& j : m.jumps) {
          if (j.guard.holds(y, 0.0)) {
            s_jump = 0;
            jump = &j;
            break;
          }
          if (!j.guard.holds(y1, 0.0)) continue;
          const double s = first_true(0.0, h, [&](double u) { return j.guard.holds(at(u), 0.0); });
          if (s < s_jump) {
            s_jump = s;
            jump = &j;
          }
        }
      }
      // leaving the invariant or ranges ends the run unless a jump comes first
      double s_end = h;
      bool dies = false;
      if (!admissible(m, y1)) {
        s_end = first_true(0.0, h, [&](double u) { return !admissible(m, at(u)); });
        dies = true;
      }
      const double s_stop = jump && s_jump <= s_end ? s_jump : s_end;

      if (res.mode == goal_mode) {
        const std::vector<double> ys = at(s_stop);
        thread_local std::vector<double> d0, d1;
        goal_.atom_values(ys, d1);
        if (goal_.holds_values(d1, kEqTol)) return finish(ys, true);
        goal_.atom_values(y, d0);
        for (std::size_t a = 0; a < goal_.atom_count(); ++a) {
          if (goal_.atom_cmp(a) != Cmp::Eq || (d0[a] > 0) == (d1[a] > 0)) continue;
          const bool up = d1[a] > 0;
          const double s = first_true(0.0, s_stop, [&](double u) {
            std::vector<double> d;
            goal_.atom_values(at(u), d);
            return (d[a] > 0) == up;
          });
          const std::vector<double> yc = at(s);
          if (goal_at(yc)) return finish(yc, true);
        }
      }

      if (jump && s_jump <= s_end) {
        std::vector<double> pre = at(s_jump);
        std::vector<double> post = pre;
        if (!jump->assign.empty()) {
          std::vector<double> val;
          jump->reset.run<double, DoubleArith>(pre, val);
          for (const auto& [slot, node] : jump->assign) post[slot] = val[node];
        }
        post[time_slot_] = 0;
        res.mode = jump->target;
        ++res.jumps;
        y = std::move(post);
        if (observe) observe(res.mode, y[time_slot_], y);
        break;
      }
      if (dies) return finish(at(s_end), false);
      y = std::move(y1);
      if (observe) observe(res.mode, y[time_slot_], y);
    }
  }
}

void MCConfig::validate() const {
  if (!(zeta > 0 && zeta < 1)) throw Error("zeta must lie in (0, 1)");
  if (!(confidence > 0 && confidence < 1)) throw Error("confidence must lie in (0, 1)");
  if (k < 0) throw Error("k must be nonnegative");
  if (!(step > 0)) throw Error("simulation step must be positive");
  if (workers < 1) throw Error("worker count must be positive");
}

MCResult estimate(const HybridModel& model, const MCConfig& cfg) {
  cfg.validate();
  const std::uint64_t n = chernoff_size(cfg.zeta, cfg.confidence);
  if (n > cfg.max_samples)
    throw Error("Chernoff-Hoeffding bound requires N = " + std::to_string(n) + " samples, above the cap of " +
                std::to_string(cfg.max_samples));
  const Distribution dist(extract_random(model));
  const Simulator sim(model);
  const std::uint64_t blocks = (n + kSampleBlock - 1) / kSampleBlock;
  std::atomic<std::uint64_t> next{0}, hits{0};
  auto work = [&] {
    for (;;) {
      const std::uint64_t b = next++;
      if (b >= blocks) return;
      std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                        static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
      std::mt19937_64 gen(seq);
      const std::uint64_t end = std::min(n, (b + 1) * kSampleBlock);
      std::uint64_t local = 0;
      for (std::uint64_t i = b * kSampleBlock; i < end; ++i)
        if (sim.run(sample(dist, gen), cfg.k, cfg.step).reached) ++local;
      hits += local;
    }
  };
  const int w = static_cast<int>(std::min<std::uint64_t>(cfg.workers, blocks));
  if (w <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < w; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  MCResult res;
  res.n_used = n;
  res.successes = hits;
  res.p_hat = static_cast<double>(res.successes) / static_cast<double>(n);
  res.ci = Interval(std::max(0.0, res.p_hat - cfg.zeta), std::min(1.0, res.p_hat + cfg.zeta));
  return res;
}

}  // namespace vreach
