#include "vreach/box.hpp"

namespace vreach {

int Box::find(const std::string& name) const {
  for (std::size_t i = 0; i < dims_.size(); ++i)
    if (dims_[i].first == name) return static_cast<int>(i);
  return -1;
}

void Box::set(const std::string& name, const Interval& x) {
  const int i = find(name);
  if (i >= 0)
    dims_[i].second = x;
  else
    dims_.emplace_back(name, x);
}

const Interval& Box::at(const std::string& name) const {
  const int i = find(name);
  if (i < 0) throw Error("unbound variable '" + name + "'");
  return dims_[i].second;
}

std::string to_string(const Box& b) {
  std::string s = "{";
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (i) s += ", ";
    s += b[i].first + ": " + to_string(b[i].second);
  }
  return s + "}";
}

}  // namespace vreach
