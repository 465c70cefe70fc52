#pragma once

#include <array>
#include <cstddef>
#include <limits>

#include "smartskin/error.hpp"
#include "smartskin/measurement.hpp"
#include "smartskin/pattern.hpp"
#include "smartskin/surrogate.hpp"

namespace smartskin {

struct OracleResult {
  ActuationPattern pattern;
  double ja_star = 0.0;    // noiseless, through the measurement pipeline
  double predicted = 0.0;  // sum of weighted column responses
  std::array<double, ActuatorGrid::columns> column_cost{};
};

/// Exact global optimum of a separable surrogate by exhaustive per-column enumeration.
///
/// Each column has 5^5 height combinations times 2^5 jet combinations. Ties resolve to the
/// candidate enumerated first (heights, then jets, lowest levels first), so flush or jet-off
/// alternatives win over equivalent settings.
inline OracleResult oracle_optimum(const SurrogatePlant& plant) {
  if (!plant.separable()) {
    throw ContractError("oracle_optimum requires cross-column coupling to be disabled");
  }
  constexpr std::size_t kRows = ActuatorGrid::rows;
  constexpr std::size_t kHeightCombos = 5 * 5 * 5 * 5 * 5;
  constexpr std::size_t kJetCombos = 1u << kRows;

  OracleResult result;
  ActuationPattern::Levels heights{};
  ActuationPattern::Levels actives{};
  for (std::size_t c = 0; c < ActuatorGrid::columns; ++c) {
    double best = std::numeric_limits<double>::infinity();
    std::array<int, kRows> best_h{};
    std::array<int, kRows> best_a{};
    for (std::size_t hc = 0; hc < kHeightCombos; ++hc) {
      std::array<int, kRows> h{};
      std::size_t rem = hc;
      for (std::size_t r = kRows; r-- > 0;) {
        h[r] = static_cast<int>(rem % 5);
        rem /= 5;
      }
      for (std::size_t jc = 0; jc < kJetCombos; ++jc) {
        ColumnState s{};
        std::array<int, kRows> a{};
        for (std::size_t r = 0; r < kRows; ++r) {
          a[r] = static_cast<int>((jc >> (kRows - 1 - r)) & 1u);
          s[r] = actuator_state(h[r], a[r] != 0);
        }
        const double g = plant.column_weights()[c] * plant.column_response(s);
        if (g < best) {
          best = g;
          best_h = h;
          best_a = a;
        }
      }
    }
    for (std::size_t r = 0; r < kRows; ++r) {
      heights[ActuatorGrid::index(r, c)] = static_cast<std::uint8_t>(best_h[r]);
      actives[ActuatorGrid::index(r, c)] = static_cast<std::uint8_t>(best_a[r]);
    }
    result.column_cost[c] = best;
    result.predicted += best;
  }
  result.pattern = ActuationPattern(heights, actives);
  const double ja_base = cost_Ja(plant.evaluate_noiseless(ActuationPattern{}), plant.taps());
  result.ja_star = cost_Ja_star(cost_Ja(plant.evaluate_noiseless(result.pattern), plant.taps()), ja_base);
  return result;
}

}  // namespace smartskin
