#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vreach/interval.hpp"

namespace vreach {

/// Ordered list of named intervals. Names are unique.
class Box {
 public:
  Box() = default;

  void set(const std::string& name, const Interval& x);
  bool has(const std::string& name) const { return find(name) >= 0; }
  const Interval& at(const std::string& name) const;
  std::size_t size() const { return dims_.size(); }

  const std::pair<std::string, Interval>& operator[](std::size_t i) const { return dims_[i]; }
  auto begin() const { return dims_.begin(); }
  auto end() const { return dims_.end(); }

 private:
  int find(const std::string& name) const;
  std::vector<std::pair<std::string, Interval>> dims_;
};

std::string to_string(const Box& b);

}  // namespace vreach
