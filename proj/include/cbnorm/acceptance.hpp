#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cbnorm/sdp.hpp"

namespace cbnorm::acceptance {

struct Config {
  sdp::Tolerances tol;
  std::uint64_t seed = 0;
  /// Criterion ids to run; empty means all.
  std::vector<int> only;
  /// Maximum criteria run at once.
  unsigned threads = 1;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  double measured = 0.0;
  std::string target;
  double tolerance = 0.0;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

/// Number of criteria in the primary suite.
constexpr int kCriteria = 10;

std::vector<CriterionResult> run(const Config& config);

/// One line per criterion.
std::string format_line(const CriterionResult& r);

}  // namespace cbnorm::acceptance
