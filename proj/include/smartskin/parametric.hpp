#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "smartskin/measurement.hpp"
#include "smartskin/error.hpp"
#include "smartskin/pattern.hpp"
#include "smartskin/plant.hpp"
#include "smartskin/seed.hpp"

namespace smartskin {

enum class ActuationMode { passive_only, passive_plus_active };

inline std::string_view to_string(ActuationMode m) {
  return m == ActuationMode::passive_only ? "passive" : "passive+active";
}

/// A contiguous band of rows, all six columns, raised to one level, optionally blowing.
struct ParametricCase {
  std::size_t id = 0;
  std::size_t first_row = 0;  // 0-based, inclusive
  std::size_t last_row = 0;   // 0-based, inclusive
  int level = 1;
  ActuationMode mode = ActuationMode::passive_only;

  std::size_t band_size() const noexcept { return last_row - first_row + 1; }

  /// 1-based row label, e.g. "2" or "2-3".
  std::string rows_label() const {
    std::string s = std::to_string(first_row + 1);
    if (last_row != first_row) s += "-" + std::to_string(last_row + 1);
    return s;
  }

  ActuationPattern expand() const {
    ActuationPattern::Levels h{};
    ActuationPattern::Levels a{};
    for (std::size_t r = first_row; r <= last_row; ++r) {
      for (std::size_t c = 0; c < ActuatorGrid::columns; ++c) {
        h[ActuatorGrid::index(r, c)] = static_cast<std::uint8_t>(level);
        a[ActuatorGrid::index(r, c)] = mode == ActuationMode::passive_plus_active ? 1 : 0;
      }
    }
    return ActuationPattern(h, a);
  }
};

/// 15 contiguous bands x 4 levels x 2 modes. Order: mode, band size, first row, level.
inline std::vector<ParametricCase> generate_cases() {
  std::vector<ParametricCase> cases;
  for (ActuationMode mode : {ActuationMode::passive_only, ActuationMode::passive_plus_active}) {
    for (std::size_t size = 1; size <= ActuatorGrid::rows; ++size) {
      for (std::size_t first = 0; first + size <= ActuatorGrid::rows; ++first) {
        for (int level = 1; level <= kMaxHeightLevel; ++level) {
          cases.push_back({cases.size(), first, first + size - 1, level, mode});
        }
      }
    }
  }
  return cases;
}

struct CaseResult {
  ParametricCase spec;
  ActuationPattern pattern;
  double ja_star = 0.0;
  double jb_star = 0.0;
  double jc_star = 0.0;
};

struct StudyResult {
  std::vector<CaseResult> cases;
  std::size_t best_passive = 0;
  std::size_t best_active = 0;
  double baseline_ja = 0.0;

  double positive_fraction() const {
    std::size_t n = 0;
    for (const auto& c : cases) n += c.ja_star > 0 ? 1 : 0;
    return cases.empty() ? 0.0 : static_cast<double>(n) / static_cast<double>(cases.size());
  }
};

/// Baseline once, then every case; case i is measured with seed derive_seed(seed, {i}).
inline StudyResult run_study(PlantEvaluator& plant, std::uint64_t seed = 0) {
  StudyResult study;
  Measurement base = plant.baseline();
  base.validate(plant.taps().size());
  study.baseline_ja = cost_Ja(base, plant.taps());
  bool have_passive = false;
  bool have_active = false;
  for (const ParametricCase& c : generate_cases()) {
    CaseResult r{c, c.expand()};
    try {
      Measurement m = plant.evaluate(effective_pattern(r.pattern).pattern(), derive_seed(seed, {c.id}));
      m.validate(plant.taps().size());
      r.ja_star = cost_Ja_star(cost_Ja(m, plant.taps()), study.baseline_ja);
    } catch (const PlantError&) {
      detail::rethrow_with_context("case " + std::to_string(c.id) + ": ");
    }
    r.jb_star = mean_height_ratio(r.pattern);
    r.jc_star = active_fraction(r.pattern);
    study.cases.push_back(r);
    const std::size_t i = study.cases.size() - 1;
    if (c.mode == ActuationMode::passive_only) {
      if (!have_passive || r.ja_star < study.cases[study.best_passive].ja_star) study.best_passive = i;
      have_passive = true;
    } else {
      if (!have_active || r.ja_star < study.cases[study.best_active].ja_star) study.best_active = i;
      have_active = true;
    }
  }
  return study;
}

}  // namespace smartskin
