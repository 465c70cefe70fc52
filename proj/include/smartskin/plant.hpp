#pragma once

#include <chrono>
#include <cstdint>

#include "smartskin/geometry.hpp"
#include "smartskin/measurement.hpp"
#include "smartskin/pattern.hpp"

namespace smartskin {

/// Anything that turns an actuation pattern into a tap-pressure measurement.
///
/// Implementations must be bit-reproducible for identical (pattern, seed). Callers may evaluate
/// concurrently only when supports_concurrent_evaluation() is true.
class PlantEvaluator {
 public:
  virtual ~PlantEvaluator() = default;

  virtual Measurement evaluate(const ActuationPattern& pattern, std::uint64_t seed) = 0;

  /// The unforced (all-off) reference measurement used to normalize J_a.
  virtual Measurement baseline() { return evaluate(ActuationPattern{}, 0); }

  virtual bool supports_concurrent_evaluation() const = 0;
  virtual std::chrono::milliseconds nominal_latency() const { return std::chrono::milliseconds{0}; }

  virtual const TapGrid& taps() const = 0;
  virtual const FlowConfig& flow() const = 0;
};

}  // namespace smartskin
