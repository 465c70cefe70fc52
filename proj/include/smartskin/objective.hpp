#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>

#include "smartskin/error.hpp"
#include "smartskin/measurement.hpp"
#include "smartskin/pattern.hpp"
#include "smartskin/plant.hpp"

namespace smartskin {

struct Evaluation {
  double fitness = 0.0;
  std::optional<ActuationPattern> pattern;  // decoded pattern, absent for continuous benchmarks
};

/// What the swarm minimizes: a map from a 60-d position to a scalar fitness.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual Evaluation evaluate(std::span<const double> position, std::uint64_t seed) = 0;
  virtual bool supports_concurrent_evaluation() const = 0;
};

/// decode_position, then effective_pattern, then the plant, then J_a*.
class PlantObjective final : public Objective {
 public:
  explicit PlantObjective(PlantEvaluator& plant, PositionBounds bounds = PositionBounds::standard(),
                          bool memoize = false)
      : plant_(plant), bounds_(bounds), memoize_(memoize) {
    bounds_.validate();
    Measurement base = plant_.baseline();
    base.validate(plant_.taps().size());
    baseline_ja_ = cost_Ja(base, plant_.taps());
    if (!(baseline_ja_ > 0)) {
      throw ContractError("baseline pressure deficit must be positive to normalize J_a, got " +
                          std::to_string(baseline_ja_));
    }
  }

  Evaluation evaluate(std::span<const double> position, std::uint64_t seed) override {
    const ActuationPattern raw = decode_position(position, bounds_);
    const ActuationPattern eff = effective_pattern(raw).pattern();
    if (memoize_) {
      std::lock_guard lock(memo_mutex_);
      if (auto it = memo_.find(eff); it != memo_.end()) return {it->second, raw};
    }
    Measurement m = plant_.evaluate(eff, seed);
    m.validate(plant_.taps().size());
    const double f = cost_Ja_star(cost_Ja(m, plant_.taps()), baseline_ja_);
    if (memoize_) {
      std::lock_guard lock(memo_mutex_);
      memo_.emplace(eff, f);
    }
    return {f, raw};
  }

  bool supports_concurrent_evaluation() const override { return plant_.supports_concurrent_evaluation(); }
  double baseline_ja() const noexcept { return baseline_ja_; }
  const PositionBounds& bounds() const noexcept { return bounds_; }

 private:
  PlantEvaluator& plant_;
  PositionBounds bounds_;
  bool memoize_;
  double baseline_ja_ = 0.0;
  std::mutex memo_mutex_;
  std::map<ActuationPattern, double> memo_;
};

/// Sum of squares of the position rescaled affinely from the bounds to [-1, 1]; minimum 0 at the box centre.
class SphereObjective final : public Objective {
 public:
  explicit SphereObjective(PositionBounds bounds = PositionBounds::standard()) : bounds_(bounds) {}

  Evaluation evaluate(std::span<const double> x, std::uint64_t) override {
    if (x.size() != kPositionDims) throw EncodingError("sphere objective expects 60 coordinates");
    double f = 0.0;
    for (std::size_t i = 0; i < kPositionDims; ++i) {
      const double y = 2.0 * (x[i] - bounds_.lower[i]) / bounds_.range(i) - 1.0;
      f += y * y;
    }
    return {f, std::nullopt};
  }
  bool supports_concurrent_evaluation() const override { return true; }

 private:
  PositionBounds bounds_;
};

/// Every position scores the same value; positions are still decoded so legality can be audited.
class ConstantObjective final : public Objective {
 public:
  explicit ConstantObjective(double value, PositionBounds bounds = PositionBounds::standard())
      : value_(value), bounds_(bounds) {}

  Evaluation evaluate(std::span<const double> x, std::uint64_t) override { return {value_, decode_position(x, bounds_)}; }
  bool supports_concurrent_evaluation() const override { return true; }

 private:
  double value_;
  PositionBounds bounds_;
};

}  // namespace smartskin
