#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "smartskin/error.hpp"

namespace smartskin {

/// Layout of the actuator array: 5 streamwise rows by 6 spanwise columns.
///
/// Row 0 is the most upstream row (nearest the ramp leading edge); column index increases
/// spanwise. Flat indices are row-major, `row * columns + column`, in [0, 30).
struct ActuatorGrid {
  static constexpr std::size_t rows = 5;
  static constexpr std::size_t columns = 6;
  static constexpr std::size_t actuators = rows * columns;

  static constexpr std::size_t index(std::size_t row, std::size_t column) noexcept { return row * columns + column; }
  static constexpr std::size_t row_of(std::size_t i) noexcept { return i / columns; }
  static constexpr std::size_t column_of(std::size_t i) noexcept { return i % columns; }
};

static_assert(ActuatorGrid::actuators == 30);

inline constexpr int kMaxHeightLevel = 4;
inline constexpr double kMillimetresPerLevel = 2.0;
inline constexpr double kMaxHeightMillimetres = kMaxHeightLevel * kMillimetresPerLevel;
/// Continuous search vector: 30 height coordinates followed by 30 jet coordinates.
inline constexpr std::size_t kPositionDims = 2 * ActuatorGrid::actuators;

/// 30 discrete heights (level 0..4, 2 mm per level) and 30 jet on/off states.
class ActuationPattern {
 public:
  using Levels = std::array<std::uint8_t, ActuatorGrid::actuators>;

  ActuationPattern() = default;

  ActuationPattern(const Levels& heights, const Levels& actives) : heights_(heights), actives_(actives) {
    for (std::size_t i = 0; i < ActuatorGrid::actuators; ++i) {
      if (heights_[i] > kMaxHeightLevel) {
        throw EncodingError("height level " + std::to_string(heights_[i]) + " at actuator " + std::to_string(i) +
                            " outside {0..4}");
      }
      if (actives_[i] > 1) {
        throw EncodingError("jet state " + std::to_string(actives_[i]) + " at actuator " + std::to_string(i) +
                            " outside {0,1}");
      }
    }
  }

  int height(std::size_t i) const { return heights_.at(i); }
  bool active(std::size_t i) const { return actives_.at(i) != 0; }
  int height(std::size_t row, std::size_t column) const { return height(ActuatorGrid::index(row, column)); }
  bool active(std::size_t row, std::size_t column) const { return active(ActuatorGrid::index(row, column)); }
  double height_mm(std::size_t i) const { return height(i) * kMillimetresPerLevel; }

  const Levels& heights() const noexcept { return heights_; }
  const Levels& actives() const noexcept { return actives_; }

  bool all_off() const noexcept {
    return std::all_of(heights_.begin(), heights_.end(), [](auto h) { return h == 0; }) &&
           std::all_of(actives_.begin(), actives_.end(), [](auto a) { return a == 0; });
  }

  auto operator<=>(const ActuationPattern&) const = default;

 private:
  Levels heights_{};
  Levels actives_{};
};

/// A pattern with jets suppressed wherever the actuator is flush (height 0).
class EffectivePattern {
 public:
  explicit EffectivePattern(const ActuationPattern& raw) : pattern_(suppress(raw)) {}

  const ActuationPattern& pattern() const noexcept { return pattern_; }
  int height(std::size_t i) const { return pattern_.height(i); }
  bool active(std::size_t i) const { return pattern_.active(i); }

  auto operator<=>(const EffectivePattern&) const = default;

 private:
  static ActuationPattern suppress(const ActuationPattern& raw) {
    ActuationPattern::Levels actives = raw.actives();
    for (std::size_t i = 0; i < actives.size(); ++i) {
      if (raw.height(i) == 0) actives[i] = 0;
    }
    return ActuationPattern(raw.heights(), actives);
  }

  ActuationPattern pattern_;
};

inline EffectivePattern effective_pattern(const ActuationPattern& p) { return EffectivePattern(p); }

/// Box bounds of the 60-dimensional continuous search space.
struct PositionBounds {
  std::array<double, kPositionDims> lower{};
  std::array<double, kPositionDims> upper{};

  /// Heights in [-0.49, 4.49], jets in [-0.49, 1.49]: equal-width rounding basins per level.
  static PositionBounds standard() {
    PositionBounds b;
    for (std::size_t i = 0; i < kPositionDims; ++i) {
      b.lower[i] = -0.49;
      b.upper[i] = i < ActuatorGrid::actuators ? kMaxHeightLevel + 0.49 : 1.49;
    }
    return b;
  }

  double range(std::size_t i) const { return upper[i] - lower[i]; }
  static constexpr int max_level(std::size_t i) noexcept { return i < ActuatorGrid::actuators ? kMaxHeightLevel : 1; }

  /// Every clamped-then-rounded coordinate must land on a legal level.
  void validate() const {
    for (std::size_t i = 0; i < kPositionDims; ++i) {
      if (!(lower[i] < upper[i])) throw ConfigError("empty bound interval at coordinate " + std::to_string(i));
      if (std::round(lower[i]) < 0 || std::round(upper[i]) > max_level(i)) {
        throw ConfigError("bound interval at coordinate " + std::to_string(i) + " rounds outside the legal levels");
      }
    }
  }
};

/// Clamp each coordinate into its bounds and round half away from zero.
inline ActuationPattern decode_position(std::span<const double> position,
                                        const PositionBounds& bounds = PositionBounds::standard()) {
  if (position.size() != kPositionDims) {
    throw EncodingError("position has " + std::to_string(position.size()) + " coordinates, expected 60");
  }
  ActuationPattern::Levels heights{};
  ActuationPattern::Levels actives{};
  for (std::size_t i = 0; i < kPositionDims; ++i) {
    if (!std::isfinite(position[i])) throw EncodingError("non-finite coordinate " + std::to_string(i));
    const double x = std::clamp(position[i], bounds.lower[i], bounds.upper[i]);
    const int level = std::clamp(static_cast<int>(std::round(x)), 0, PositionBounds::max_level(i));
    if (i < ActuatorGrid::actuators) {
      heights[i] = static_cast<std::uint8_t>(level);
    } else {
      actives[i - ActuatorGrid::actuators] = static_cast<std::uint8_t>(level);
    }
  }
  return ActuationPattern(heights, actives);
}

/// Exact integer embedding of a pattern into the search space; inverse of decode_position.
inline std::array<double, kPositionDims> encode_pattern(const ActuationPattern& p) {
  std::array<double, kPositionDims> x{};
  for (std::size_t i = 0; i < ActuatorGrid::actuators; ++i) {
    x[i] = p.height(i);
    x[i + ActuatorGrid::actuators] = p.active(i) ? 1.0 : 0.0;
  }
  return x;
}

/// Mean physical height over all actuators divided by the 8 mm maximum.
inline double mean_height_ratio(const ActuationPattern& p) {
  double sum = 0.0;
  for (std::size_t i = 0; i < ActuatorGrid::actuators; ++i) sum += p.height_mm(i);
  return sum / ActuatorGrid::actuators / kMaxHeightMillimetres;
}

/// Mean of the raw jet states (jets on flush actuators still count).
inline double active_fraction(const ActuationPattern& p) {
  int on = 0;
  for (std::size_t i = 0; i < ActuatorGrid::actuators; ++i) on += p.active(i) ? 1 : 0;
  return static_cast<double>(on) / ActuatorGrid::actuators;
}

/// Heights mapped affinely {0..4} -> [-1,1], jets {0,1} -> {-1,+1}.
inline std::array<double, kPositionDims> rescale_for_embedding(const ActuationPattern& p) {
  std::array<double, kPositionDims> x{};
  for (std::size_t i = 0; i < ActuatorGrid::actuators; ++i) {
    x[i] = 2.0 * p.height(i) / kMaxHeightLevel - 1.0;
    x[i + ActuatorGrid::actuators] = p.active(i) ? 1.0 : -1.0;
  }
  return x;
}

/// Comma-separated 30 height levels then 30 jet flags, row-major.
inline std::string to_string(const ActuationPattern& p) {
  std::string out;
  out.reserve(2 * kPositionDims);
  for (std::size_t i = 0; i < kPositionDims; ++i) {
    if (i) out += ',';
    out += static_cast<char>('0' + (i < ActuatorGrid::actuators ? p.height(i) : (p.active(i - ActuatorGrid::actuators) ? 1 : 0)));
  }
  return out;
}

namespace detail {

inline std::string field_name(std::size_t field) {
  const bool is_height = field < ActuatorGrid::actuators;
  const std::size_t i = is_height ? field : field - ActuatorGrid::actuators;
  return "field " + std::to_string(field + 1) + " (" + (is_height ? "height" : "jet") + " of row " +
         std::to_string(ActuatorGrid::row_of(i) + 1) + ", column " + std::to_string(ActuatorGrid::column_of(i) + 1) + ")";
}

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

}  // namespace detail

/// Parses the textual form written by to_string. Errors name the offending field.
inline ActuationPattern parse_pattern(std::string_view text) {
  text = detail::trim(text);
  ActuationPattern::Levels heights{};
  ActuationPattern::Levels actives{};
  std::size_t field = 0;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view token = detail::trim(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos));
    if (field >= kPositionDims) {
      throw EncodingError("pattern has more than 60 fields");
    }
    int value = -1;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || end != token.data() + token.size()) {
      throw EncodingError(detail::field_name(field) + ": '" + std::string(token) + "' is not an integer");
    }
    if (value < 0 || value > PositionBounds::max_level(field)) {
      throw EncodingError(detail::field_name(field) + ": value " + std::to_string(value) + " outside {0.." +
                          std::to_string(PositionBounds::max_level(field)) + "}");
    }
    if (field < ActuatorGrid::actuators) {
      heights[field] = static_cast<std::uint8_t>(value);
    } else {
      actives[field - ActuatorGrid::actuators] = static_cast<std::uint8_t>(value);
    }
    ++field;
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (field != kPositionDims) {
    throw EncodingError("pattern has " + std::to_string(field) + " fields, expected 60 (missing " +
                        detail::field_name(field) + ")");
  }
  return ActuationPattern(heights, actives);
}

}  // namespace smartskin
