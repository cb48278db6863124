#pragma once

#include <string>

#include "vreach/expr.hpp"
#include "vreach/interval.hpp"

namespace vreach {

struct HybridModel;

/// Parameters of a continuous random parameter. Numeric parameters are kept
/// as enclosures of the written literals, plus their nearest doubles.
struct DistributionSpec {
  enum class Kind { Normal, Uniform, Exponential, UserPdf };
  Kind kind = Kind::Normal;
  std::string var;
  Interval p1, p2;  // Normal: mu, sigma. Uniform: a, b. Exponential: lambda.
  double p1d = 0, p2d = 0;
  ExprPtr pdf;      // UserPdf density over `var`
  Interval support;

  static DistributionSpec normal(double mu, double sigma);
  static DistributionSpec uniform(double a, double b);
  static DistributionSpec exponential(double lambda);
  static DistributionSpec user(const std::string& var, ExprPtr pdf, const Interval& support);
};

/// Reads the single random-parameter declaration of a model
/// (`N(mu, sigma) x;`, `U(a, b) x;`, `E(lambda) x;`, `pdf(expr, lo, hi) x;`).
DistributionSpec extract_random(const HybridModel& m);

/// Finite domain with a certified bound on the probability mass outside it.
struct TailBounds {
  Interval domain;
  double tail = 0;  // verified upper bound of the mass outside domain
};

class Distribution {
 public:
  explicit Distribution(DistributionSpec spec);

  const DistributionSpec& spec() const { return spec_; }
  Interval support() const { return support_; }

  /// Enclosure of the density over x (zero outside the support), lo >= 0.
  Interval pdf(const Interval& x) const;
  /// Enclosure of the first derivative of the density restricted to its
  /// support, over x intersected with the support.
  Interval d1(const Interval& x) const;
  /// Enclosure of the fourth derivative of the density restricted to its
  /// support, over x intersected with the support.
  Interval d4(const Interval& x) const;
  /// Throws Error for unbounded UserPdf support; 0 < mass < 1.
  TailBounds tail_bounds(double mass) const;

  double pdf_point(double x) const;

 private:
  DistributionSpec spec_;
  Interval support_;
  ExprPtr d1_expr_, d4_expr_;
};

}  // namespace vreach
