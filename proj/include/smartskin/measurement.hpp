#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "smartskin/error.hpp"
#include "smartskin/geometry.hpp"

namespace smartskin {

/// Time-averaged tap pressures (Pa) for one actuation.
struct Measurement {
  std::vector<double> mean_pressure;
  double freestream_pressure = 0.0;
  std::size_t sample_count = 1;
  std::uint64_t seed = 0;

  void validate(std::size_t expected_taps = TapGrid::kTaps) const {
    if (mean_pressure.size() != expected_taps) {
      throw DimensionMismatch("measurement has " + std::to_string(mean_pressure.size()) + " taps, expected " +
                              std::to_string(expected_taps));
    }
    for (double p : mean_pressure) {
      if (!std::isfinite(p)) throw MalformedResponse("non-finite tap pressure");
    }
    if (!std::isfinite(freestream_pressure)) throw MalformedResponse("non-finite freestream pressure");
    if (sample_count == 0) throw MalformedResponse("measurement with zero samples");
  }
};

/// Integrated pressure deficit, sum over taps of weight * (p0 - p).
inline double cost_Ja(const Measurement& m, const TapGrid& taps) {
  if (m.mean_pressure.size() != taps.size()) {
    throw DimensionMismatch("cost_Ja: measurement has " + std::to_string(m.mean_pressure.size()) +
                            " taps but the grid has " + std::to_string(taps.size()));
  }
  double sum = 0.0;
  for (std::size_t t = 0; t < taps.size(); ++t) {
    sum += taps.weights()[t] * (m.freestream_pressure - m.mean_pressure[t]);
  }
  return sum;
}

/// Baseline-normalized cost, J_a / J_a,baseline - 1. Negative means better pressure recovery.
inline double cost_Ja_star(double ja, double ja_baseline) {
  if (!(ja_baseline > 0)) {
    throw ContractError("cost_Ja_star: baseline cost must be positive, got " + std::to_string(ja_baseline));
  }
  return ja / ja_baseline - 1.0;
}

inline std::vector<double> cp_profile(const Measurement& m, const FlowConfig& flow) {
  if (!(flow.freestream_velocity > 0)) throw ContractError("cp_profile: freestream velocity must be positive");
  const double q = flow.dynamic_pressure();
  std::vector<double> cp(m.mean_pressure.size());
  for (std::size_t t = 0; t < cp.size(); ++t) cp[t] = (m.mean_pressure[t] - m.freestream_pressure) / q;
  return cp;
}

}  // namespace smartskin
