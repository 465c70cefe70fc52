#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "smartskin/error.hpp"

namespace smartskin {

struct FlowConfig {
  double freestream_velocity = 7.0;  // m/s
  double density = 1.204;            // kg/m^3
  double step_height = 0.05;         // m
  double shape_factor = 0.703;

  double dynamic_pressure() const { return 0.5 * density * freestream_velocity * freestream_velocity; }
  double ramp_length() const { return 2.0 * step_height / shape_factor; }

  void validate() const {
    if (!(freestream_velocity > 0) || !(density > 0) || !(step_height > 0)) {
      throw ConfigError("flow velocity, density and step height must be positive");
    }
    if (!(shape_factor > 0 && shape_factor <= 1)) throw ConfigError("shape factor must lie in (0, 1]");
  }
};

/// Wall height of the rounded ramp, y/H = (sin(a pi x/H) - a pi x/H) / (2 pi) + 1, for x in [0, 2H/a].
inline double ramp_profile(double x, const FlowConfig& flow) {
  if (!(x >= 0.0 && x <= flow.ramp_length())) {
    throw DomainError("ramp_profile: x = " + std::to_string(x) + " outside [0, 2H/a]");
  }
  const double phase = flow.shape_factor * std::numbers::pi * x / flow.step_height;
  return flow.step_height * ((std::sin(phase) - phase) / (2.0 * std::numbers::pi) + 1.0);
}

/// Pressure taps on a staggered stations x spanwise grid with quadrature weights (area elements).
///
/// Flat tap index is station-major: `station * spanwise + k`.
class TapGrid {
 public:
  static constexpr std::size_t kStations = 6;
  static constexpr std::size_t kSpanwise = 7;
  static constexpr std::size_t kTaps = kStations * kSpanwise;

  TapGrid(std::vector<double> x, std::vector<double> z, std::vector<double> weights)
      : x_(std::move(x)), z_(std::move(z)), weights_(std::move(weights)) {
    if (x_.size() != kStations || z_.size() != kSpanwise) {
      throw ConfigError("tap grid must have 6 streamwise stations and 7 spanwise positions");
    }
    if (weights_.size() != kTaps) throw ConfigError("tap grid needs 42 quadrature weights");
    for (double w : weights_) {
      if (!(w > 0) || !std::isfinite(w)) throw ConfigError("tap quadrature weights must be positive");
    }
  }

  /// Equal area element per tap.
  static TapGrid uniform(std::vector<double> x, std::vector<double> z, double area_per_tap) {
    return TapGrid(std::move(x), std::move(z), std::vector<double>(kTaps, area_per_tap));
  }

  static constexpr std::size_t index(std::size_t station, std::size_t k) noexcept { return station * kSpanwise + k; }
  std::size_t size() const noexcept { return kTaps; }
  const std::vector<double>& x() const noexcept { return x_; }
  const std::vector<double>& z() const noexcept { return z_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double total_area() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

 private:
  std::vector<double> x_;
  std::vector<double> z_;
  std::vector<double> weights_;
};

}  // namespace smartskin
