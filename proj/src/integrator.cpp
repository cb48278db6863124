#include "vreach/integrator.hpp"

namespace vreach {

using namespace rounding;

namespace {

// f((a+b)/2). The midpoint is m0 + e exactly with m0 = fl(a+b)/2; using
// f(m0) + f'(near m0) * e avoids the slope times one ulp of m.
Interval midpoint_pdf(const Distribution& d, const Interval& s) {
  const double a = s.lo(), b = s.hi();
  const double sum = a + b;
  const double m0 = sum / 2;
  if (!std::isfinite(sum) || std::fabs(m0) < kTiny) return d.pdf((Interval(a) + Interval(b)) / Interval(2.0));
  const double bb = sum - a;
  const double err = (a - (sum - bb)) + (b - bb);
  if (err == 0) return d.pdf(Interval(m0));
  const Interval near = err < 0 ? Interval(next_down(m0), m0) : Interval(m0, next_up(m0));
  if (!d.support().contains(near)) return d.pdf(near);
  const Interval e = Interval(err) / Interval(2.0);
  return clamp_nonneg(d.pdf(Interval(m0)) + d.d1(near) * e);
}

}  // namespace

Interval simpson_enclosure(const Distribution& d, const Interval& seg) {
  const auto s = intersect(seg, d.support());
  if (!s || s->is_thin()) return Interval(0.0);
  if (!s->is_finite()) throw DomainError("cannot integrate over unbounded " + to_string(*s));
  const Interval a(s->lo()), b(s->hi());
  const Interval h = b - a;
  const Interval rule = h / Interval(6.0) * (d.pdf(a) + Interval(4.0) * midpoint_pdf(d, *s) + d.pdf(b));
  const Interval rem = pow_int(h, 5) / Interval(2880.0) * d.d4(*s);
  return clamp_nonneg(rule - rem);
}

std::vector<PartitionCell> partition_rate(const Distribution& d, const Interval& domain, double rate) {
  if (!domain.is_finite()) throw DomainError("partition domain must be finite");
  if (!(rate > 0)) throw DomainError("partition budget must be positive");
  std::vector<PartitionCell> out;
  std::vector<Interval> stack{domain};
  while (!stack.empty()) {
    const Interval c = stack.back();
    stack.pop_back();
    const Interval mass = simpson_enclosure(d, c);
    const double allow = mul_down(rate, sub_down(c.hi(), c.lo()));
    if (width(mass) <= allow) {
      out.push_back({c, mass});
      continue;
    }
    try {
      auto [l, r] = bisect(c);
      stack.push_back(r);
      stack.push_back(l);
    } catch (const CannotSplit&) {
      throw PrecisionExhausted(c, "integration budget cannot be met on " + to_string(c) + " (mass " +
                                      to_string(mass) + ")");
    }
  }
  return out;
}

std::vector<PartitionCell> partition(const Distribution& d, const Interval& domain, double budget) {
  if (domain.is_thin()) return {{domain, Interval(0.0)}};
  const double rate = div_down(budget, width(domain));
  return partition_rate(d, domain, rate);
}

Interval total_mass(const std::vector<PartitionCell>& cells) {
  Interval s(0.0);
  for (const auto& c : cells) s += c.mass;
  return s;
}

}  // namespace vreach
