#include "vreach/density.hpp"

#include "vreach/pdrh.hpp"

namespace vreach {

using namespace rounding;

DistributionSpec DistributionSpec::normal(double mu, double sigma) {
  DistributionSpec s;
  s.kind = Kind::Normal;
  s.p1 = Interval(mu);
  s.p2 = Interval(sigma);
  s.p1d = mu;
  s.p2d = sigma;
  s.support = Interval::entire();
  return s;
}

DistributionSpec DistributionSpec::uniform(double a, double b) {
  DistributionSpec s;
  s.kind = Kind::Uniform;
  s.p1 = Interval(a);
  s.p2 = Interval(b);
  s.p1d = a;
  s.p2d = b;
  s.support = Interval(a, b);
  return s;
}

DistributionSpec DistributionSpec::exponential(double lambda) {
  DistributionSpec s;
  s.kind = Kind::Exponential;
  s.p1 = Interval(lambda);
  s.p1d = lambda;
  s.support = Interval(0.0, kInf);
  return s;
}

DistributionSpec DistributionSpec::user(const std::string& var, ExprPtr pdf, const Interval& support) {
  DistributionSpec s;
  s.kind = Kind::UserPdf;
  s.var = var;
  s.pdf = std::move(pdf);
  s.support = support;
  return s;
}

namespace {

using K = PdrhError::Kind;

struct Arg {
  Interval enc;
  double point;
};

Arg constant_arg(const RandomDecl& r, const ExprPtr& e) {
  if (!is_constant(*e))
    throw PdrhError(K::InvalidDistribution, "non-numeric argument '" + print(*e) + "' for " + r.name, r.line, r.column);
  Box empty;
  try {
    return {eval(*e, empty), eval_point(*e, [](const std::string&) { return 0.0; })};
  } catch (const Error&) {
    throw PdrhError(K::InvalidDistribution, "cannot evaluate argument '" + print(*e) + "'", r.line, r.column);
  }
}

void arity(const RandomDecl& r, std::size_t n) {
  if (r.args.size() != n)
    throw PdrhError(K::InvalidDistribution,
                    r.dist + " takes " + std::to_string(n) + " arguments, got " + std::to_string(r.args.size()), r.line,
                    r.column);
}

}  // namespace

DistributionSpec extract_random(const HybridModel& m) {
  if (m.randoms.empty()) throw PdrhError(K::MissingRandom, "model declares no random parameter");
  if (m.randoms.size() > 1)
    throw PdrhError(K::Unsupported, "more than one random parameter is not yet supported", m.randoms[1].line,
                    m.randoms[1].column);
  const RandomDecl& r = m.randoms[0];
  DistributionSpec s;
  s.var = r.name;
  auto invalid = [&](const std::string& msg) { return PdrhError(K::InvalidDistribution, msg, r.line, r.column); };
  if (r.dist == "N") {
    arity(r, 2);
    const Arg mu = constant_arg(r, r.args[0]), sigma = constant_arg(r, r.args[1]);
    if (!(sigma.enc.lo() > 0)) throw invalid("normal deviation must be positive");
    s.kind = DistributionSpec::Kind::Normal;
    s.p1 = mu.enc;
    s.p2 = sigma.enc;
    s.p1d = mu.point;
    s.p2d = sigma.point;
    s.support = Interval::entire();
  } else if (r.dist == "U") {
    arity(r, 2);
    const Arg a = constant_arg(r, r.args[0]), b = constant_arg(r, r.args[1]);
    if (!(a.enc.hi() < b.enc.lo())) throw invalid("uniform bounds must satisfy a < b");
    if (!a.enc.is_thin() || !b.enc.is_thin())
      throw invalid("uniform bounds must be exactly representable binary numbers");
    s.kind = DistributionSpec::Kind::Uniform;
    s.p1 = a.enc;
    s.p2 = b.enc;
    s.p1d = a.point;
    s.p2d = b.point;
    s.support = Interval(a.point, b.point);
  } else if (r.dist == "E") {
    arity(r, 1);
    const Arg l = constant_arg(r, r.args[0]);
    if (!(l.enc.lo() > 0)) throw invalid("exponential rate must be positive");
    s.kind = DistributionSpec::Kind::Exponential;
    s.p1 = l.enc;
    s.p1d = l.point;
    s.support = Interval(0.0, kInf);
  } else if (r.dist == "pdf") {
    arity(r, 3);
    std::set<std::string> used;
    free_vars(*r.args[0], used);
    for (const auto& v : used)
      if (v != r.name) throw invalid("density may only depend on " + r.name + ", found " + v);
    const Arg lo = constant_arg(r, r.args[1]), hi = constant_arg(r, r.args[2]);
    if (!lo.enc.is_thin() || !hi.enc.is_thin())
      throw invalid("support bounds must be exactly representable binary numbers");
    if (!(lo.point < hi.point)) throw invalid("density support must satisfy lo < hi");
    s.kind = DistributionSpec::Kind::UserPdf;
    s.pdf = r.args[0];
    s.support = Interval(lo.point, hi.point);
  } else if (r.dist == "DC") {
    throw PdrhError(K::Unsupported, "discrete random parameters are not supported", r.line, r.column);
  } else {
    throw PdrhError(K::UnknownDistribution, "unknown distribution '" + r.dist + "'", r.line, r.column);
  }
  return s;
}

Distribution::Distribution(DistributionSpec spec) : spec_(std::move(spec)), support_(spec_.support) {
  if (spec_.kind == DistributionSpec::Kind::UserPdf) {
    try {
      d1_expr_ = derivative(spec_.pdf, spec_.var);
      ExprPtr d = d1_expr_;
      for (int i = 1; i < 4; ++i) d = derivative(d, spec_.var);
      d4_expr_ = d;
    } catch (const Error& e) {
      throw Error(std::string("unsupported density: ") + e.what());
    }
  }
}

namespace {

const Interval& sqrt_2pi() {
  static const Interval v = sqrt(Interval(2.0) * pi());
  return v;
}

}  // namespace

Interval Distribution::pdf(const Interval& x) const {
  const auto in = intersect(x, support_);
  if (!in) return Interval(0.0);
  const bool partial = !support_.contains(x);
  Interval r;
  switch (spec_.kind) {
    case DistributionSpec::Kind::Normal: {
      const Interval z = (*in - spec_.p1) / spec_.p2;
      r = exp(-sqr(z) / Interval(2.0)) / (spec_.p2 * sqrt_2pi());
      break;
    }
    case DistributionSpec::Kind::Uniform: r = Interval(1.0) / (spec_.p2 - spec_.p1); break;
    case DistributionSpec::Kind::Exponential: r = spec_.p1 * exp(-spec_.p1 * *in); break;
    case DistributionSpec::Kind::UserPdf: {
      Box env;
      env.set(spec_.var, *in);
      r = eval(*spec_.pdf, env);
      break;
    }
  }
  r = clamp_nonneg(r);
  return partial ? hull(r, Interval(0.0)) : r;
}

Interval Distribution::d1(const Interval& x) const {
  const auto in = intersect(x, support_);
  if (!in) return Interval(0.0);
  switch (spec_.kind) {
    case DistributionSpec::Kind::Normal: {
      const Interval z = (*in - spec_.p1) / spec_.p2;
      const Interval f = exp(-sqr(z) / Interval(2.0)) / (spec_.p2 * sqrt_2pi());
      return -(f * z) / spec_.p2;
    }
    case DistributionSpec::Kind::Uniform: return Interval(0.0);
    case DistributionSpec::Kind::Exponential: return -(sqr(spec_.p1) * exp(-spec_.p1 * *in));
    case DistributionSpec::Kind::UserPdf: {
      Box env;
      env.set(spec_.var, *in);
      return eval(*d1_expr_, env);
    }
  }
  return Interval::entire();
}

Interval Distribution::d4(const Interval& x) const {
  const auto in = intersect(x, support_);
  if (!in) return Interval(0.0);
  switch (spec_.kind) {
    case DistributionSpec::Kind::Normal: {
      const Interval z = (*in - spec_.p1) / spec_.p2;
      const Interval u = sqr(z);
      const Interval f = exp(-u / Interval(2.0)) / (spec_.p2 * sqrt_2pi());
      return f * (sqr(u - Interval(3.0)) - Interval(6.0)) / pow_int(spec_.p2, 4);
    }
    case DistributionSpec::Kind::Uniform: return Interval(0.0);
    case DistributionSpec::Kind::Exponential: return pow_int(spec_.p1, 5) * exp(-spec_.p1 * *in);
    case DistributionSpec::Kind::UserPdf: {
      Box env;
      env.set(spec_.var, *in);
      return eval(*d4_expr_, env);
    }
  }
  return Interval::entire();
}

double Distribution::pdf_point(double x) const {
  if (!support_.contains(x)) return 0.0;
  switch (spec_.kind) {
    case DistributionSpec::Kind::Normal: {
      const double z = (x - spec_.p1d) / spec_.p2d;
      return std::exp(-0.5 * z * z) / (spec_.p2d * 2.5066282746310002);
    }
    case DistributionSpec::Kind::Uniform: return 1.0 / (spec_.p2d - spec_.p1d);
    case DistributionSpec::Kind::Exponential: return spec_.p1d * std::exp(-spec_.p1d * x);
    case DistributionSpec::Kind::UserPdf:
      return std::max(0.0, eval_point(*spec_.pdf, [&](const std::string&) { return x; }));
  }
  return 0.0;
}

namespace {

// Upper bound of 2 * Phi_bar(c) via the Mills ratio, Phi_bar(c) <= phi(c)/c.
double normal_two_tail(double c) {
  const Interval C(c);
  const Interval phi = exp(-sqr(C) / Interval(2.0)) / sqrt_2pi();
  return (Interval(2.0) * phi / C).hi();
}

}  // namespace

TailBounds Distribution::tail_bounds(double mass) const {
  if (!(mass > 0 && mass < 1)) throw DomainError("tail mass must lie in (0, 1)");
  // Aim at half the allowance so that a quadrature of the domain can still
  // certify a mass of at least 1 - mass.
  const double target = mass / 2;
  switch (spec_.kind) {
    case DistributionSpec::Kind::Uniform:
    case DistributionSpec::Kind::UserPdf:
      if (!support_.is_finite()) throw Error("unsupported: density with unbounded support");
      return {support_, 0.0};
    case DistributionSpec::Kind::Normal: {
      double hi = 1.0;
      while (normal_two_tail(hi) > target) {
        hi *= 2;
        if (hi > 1e6) throw Error("tail bound search diverged");
      }
      double lo = hi / 2;
      for (int i = 0; i < 60 && hi - lo > 1e-12 * hi; ++i) {
        const double m = 0.5 * (lo + hi);
        if (normal_two_tail(m) <= target)
          hi = m;
        else
          lo = m;
      }
      const Interval c(hi);
      const double a = (spec_.p1 - c * spec_.p2).lo();
      const double b = (spec_.p1 + c * spec_.p2).hi();
      return {Interval(a, b), normal_two_tail(hi)};
    }
    case DistributionSpec::Kind::Exponential: {
      const double lam = spec_.p1.lo();
      double b = -std::log(target) / lam;
      auto tail = [&](double x) { return exp(-spec_.p1 * Interval(x)).hi(); };
      while (tail(b) > target) b = next_up(b) * (1 + 1e-15);
      return {Interval(0.0, b), tail(b)};
    }
  }
  throw Error("bad distribution");
}

}  // namespace vreach
