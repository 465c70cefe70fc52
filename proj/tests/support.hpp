#pragma once

#include <initializer_list>

#include "smartskin/smartskin.hpp"

namespace testing_support {

inline smartskin::SurrogateConfig default_config() {
  return smartskin::load_surrogate_config(SMARTSKIN_TEST_CONFIG);
}

inline smartskin::SurrogateConfig noiseless_config() {
  auto c = default_config();
  c.noise_sigma = 0.0;
  return c;
}

// Rows are 1-based here, matching how the study talks about them.
inline smartskin::ActuationPattern band(std::initializer_list<int> rows, int level, bool blowing) {
  smartskin::ActuationPattern::Levels h{};
  smartskin::ActuationPattern::Levels a{};
  for (int r : rows) {
    for (std::size_t c = 0; c < smartskin::ActuatorGrid::columns; ++c) {
      h[smartskin::ActuatorGrid::index(static_cast<std::size_t>(r - 1), c)] = static_cast<std::uint8_t>(level);
      a[smartskin::ActuatorGrid::index(static_cast<std::size_t>(r - 1), c)] = blowing ? 1 : 0;
    }
  }
  return smartskin::ActuationPattern(h, a);
}

inline double ja_star(smartskin::PlantEvaluator& plant, const smartskin::ActuationPattern& p, std::uint64_t seed = 0) {
  const double base = smartskin::cost_Ja(plant.baseline(), plant.taps());
  return smartskin::cost_Ja_star(
      smartskin::cost_Ja(plant.evaluate(smartskin::effective_pattern(p).pattern(), seed), plant.taps()), base);
}

}  // namespace testing_support
