#pragma once

#include <vector>

#include "vreach/density.hpp"
#include "vreach/interval.hpp"

namespace vreach {

/// A parameter cell with a verified enclosure of the density mass on it.
struct PartitionCell {
  Interval cell;
  Interval mass;
};

/// Raised when a budget cannot be met before cells stop being splittable.
class PrecisionExhausted : public Error {
 public:
  PrecisionExhausted(const Interval& where, const std::string& msg) : Error(msg), where_(where) {}
  const Interval& where() const { return where_; }

 private:
  Interval where_;
};

/// Simpson's rule with its remainder term, in interval arithmetic:
/// (b-a)/6 (f(a) + 4 f(m) + f(b)) - (b-a)^5/2880 f''''([a,b]).
/// The segment is clipped to the support; the result has lo >= 0.
Interval simpson_enclosure(const Distribution& d, const Interval& seg);

/// Recursive bisection of `domain` until every cell's mass enclosure has
/// width <= budget * width(cell) / width(domain). Cells are returned sorted
/// by position.
std::vector<PartitionCell> partition(const Distribution& d, const Interval& domain, double budget);

/// Same, with the per-cell allowance given as a density (width per unit length).
std::vector<PartitionCell> partition_rate(const Distribution& d, const Interval& domain, double rate);

/// Left-to-right interval sum of the cell masses.
Interval total_mass(const std::vector<PartitionCell>& cells);

}  // namespace vreach
