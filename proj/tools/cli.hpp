#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vreach/solver.hpp"

namespace vreach::cli {

inline constexpr const char* kVersion = "1.0.0";

struct RunResult {
  double p_lower = 0;
  double p_upper = 1;
  bool complete = false;
};

struct RunRecord {
  std::string model;
  double epsilon = 0;
  std::vector<ProgressEvent> events;
  RunResult result;
};

std::string to_json(const RunRecord& rec);
void emit_json(const RunRecord& rec, const std::string& path);
/// Inverse of to_json; throws Error on schema mismatch.
RunRecord parse_json(const std::string& text);

/// Runs the command line; returns the process exit code
/// (0 epsilon met, 2 sound but incomplete, 1 error).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vreach::cli
