#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "smartskin/error.hpp"

namespace smartskin {

struct Envelope {
  std::vector<double> min;
  std::vector<double> max;
  std::size_t best_run = 0;
};

/// Pointwise min/max of equally long learning curves. The best run has the lowest final value;
/// ties go to the run that first reached that value, then to the lower run index.
inline Envelope learning_envelope(std::span<const std::vector<double>> curves) {
  if (curves.empty()) throw DomainError("learning_envelope needs at least one curve");
  const std::size_t n = curves.front().size();
  if (n == 0) throw DomainError("learning_envelope: empty curve");
  for (std::size_t r = 0; r < curves.size(); ++r) {
    if (curves[r].size() != n) {
      throw DomainError("learning_envelope: curve " + std::to_string(r) + " has " + std::to_string(curves[r].size()) +
                        " points, expected " + std::to_string(n));
    }
  }
  Envelope env;
  env.min = curves.front();
  env.max = curves.front();
  for (std::size_t r = 1; r < curves.size(); ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      env.min[i] = std::min(env.min[i], curves[r][i]);
      env.max[i] = std::max(env.max[i], curves[r][i]);
    }
  }
  auto attained = [&](std::size_t r) {
    const double final_value = curves[r].back();
    std::size_t i = n - 1;
    while (i > 0 && curves[r][i - 1] == final_value) --i;
    return i;
  };
  for (std::size_t r = 1; r < curves.size(); ++r) {
    const double f = curves[r].back();
    const double b = curves[env.best_run].back();
    if (f < b || (f == b && attained(r) < attained(env.best_run))) env.best_run = r;
  }
  return env;
}

}  // namespace smartskin
