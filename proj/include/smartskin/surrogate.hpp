#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "smartskin/error.hpp"
#include "smartskin/geometry.hpp"
#include "smartskin/measurement.hpp"
#include "smartskin/pattern.hpp"
#include "smartskin/plant.hpp"
#include "smartskin/seed.hpp"

namespace smartskin {

/// Effective state of one actuator: 0 flush, 1..4 passive at that level, 5..8 blowing at level 1..4.
using ActuatorState = std::uint8_t;
inline constexpr std::size_t kActuatorStates = 9;
inline constexpr std::size_t kRowPairs = ActuatorGrid::rows * (ActuatorGrid::rows - 1) / 2;

constexpr ActuatorState actuator_state(int level, bool blowing) noexcept {
  return level == 0 ? ActuatorState{0} : static_cast<ActuatorState>(level + (blowing ? 4 : 0));
}
constexpr int state_level(ActuatorState s) noexcept { return s == 0 ? 0 : (s <= 4 ? s : s - 4); }
constexpr bool state_blowing(ActuatorState s) noexcept { return s > 4; }

/// Index of the row pair (r, s), r < s, in lexicographic order (0,1), (0,2), ..., (3,4).
constexpr std::size_t row_pair_index(std::size_t r, std::size_t s) noexcept {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < r; ++i) idx += ActuatorGrid::rows - 1 - i;
  return idx + (s - r - 1);
}

using ColumnState = std::array<ActuatorState, ActuatorGrid::rows>;

struct CouplingConfig {
  bool enabled = false;
  double strength = 0.0;
  double width = 0.6;  // in units of H
};

/// Everything that defines a surrogate plant; serialized as JSON.
struct SurrogateConfig {
  int version = 1;
  FlowConfig flow;
  double freestream_pressure = 0.0;

  std::vector<double> tap_x_over_h;
  std::vector<double> tap_z_over_h;
  double area_per_tap = 7.5e-4;
  std::vector<double> baseline_cp;  // 42 values, station-major

  using LevelTable = std::array<std::array<double, kMaxHeightLevel + 1>, ActuatorGrid::rows>;
  using PairTable = std::array<std::array<double, kActuatorStates>, kActuatorStates>;
  LevelTable passive{};
  LevelTable active{};
  std::array<PairTable, kRowPairs> interaction{};

  std::array<double, TapGrid::kStations> streamwise_shape{};
  std::array<double, ActuatorGrid::columns> actuator_z_over_h{};
  double spanwise_width = 0.5;
  double side_attenuation = 1.0;

  CouplingConfig coupling;
  double noise_sigma = 0.0;  // Pa, per tap
  std::uint64_t seed = 0;

  TapGrid tap_grid() const {
    std::vector<double> x(tap_x_over_h.size());
    std::vector<double> z(tap_z_over_h.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = tap_x_over_h[i] * flow.step_height;
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = tap_z_over_h[i] * flow.step_height;
    return TapGrid::uniform(std::move(x), std::move(z), area_per_tap);
  }

  void validate() const {
    if (version != 1) throw ConfigError("unsupported surrogate config version " + std::to_string(version));
    flow.validate();
    tap_grid();
    if (baseline_cp.size() != TapGrid::kTaps) throw ConfigError("baseline_cp needs 42 values");
    double weighted = 0.0;
    for (double c : baseline_cp) weighted += c;
    if (!(weighted < 0)) throw ConfigError("baseline Cp must integrate to a positive pressure deficit");
    for (std::size_t r = 0; r < ActuatorGrid::rows; ++r) {
      if (passive[r][0] != 0.0 || active[r][0] != 0.0) {
        throw ConfigError("flush actuators (level 0) must have zero response");
      }
    }
    for (const auto& t : interaction) {
      if (t[0][0] != 0.0) throw ConfigError("interaction of two flush actuators must be zero");
    }
    double shape_sum = 0.0;
    for (double s : streamwise_shape) shape_sum += s;
    if (shape_sum == 0.0) throw ConfigError("streamwise kernel shape sums to zero");
    if (!(spanwise_width > 0)) throw ConfigError("spanwise kernel width must be positive");
    if (!(side_attenuation > 0 && side_attenuation <= 1)) throw ConfigError("side attenuation must lie in (0, 1]");
    if (coupling.enabled && !(coupling.width > 0)) throw ConfigError("coupling width must be positive");
    if (!(noise_sigma >= 0)) throw ConfigError("noise sigma must be non-negative");
  }
};

inline void to_json(nlohmann::json& j, const SurrogateConfig& c) {
  j = nlohmann::json{
      {"format", "smartskin-surrogate"},
      {"version", c.version},
      {"flow",
       {{"freestream_velocity", c.flow.freestream_velocity},
        {"density", c.flow.density},
        {"step_height", c.flow.step_height},
        {"shape_factor", c.flow.shape_factor},
        {"freestream_pressure", c.freestream_pressure}}},
      {"taps",
       {{"x_over_h", c.tap_x_over_h},
        {"z_over_h", c.tap_z_over_h},
        {"area_per_tap", c.area_per_tap},
        {"baseline_cp", c.baseline_cp}}},
      {"response", {{"passive", c.passive}, {"active", c.active}, {"interaction", c.interaction}}},
      {"kernel",
       {{"streamwise_shape", c.streamwise_shape},
        {"actuator_z_over_h", c.actuator_z_over_h},
        {"spanwise_width", c.spanwise_width},
        {"side_attenuation", c.side_attenuation}}},
      {"coupling", {{"enabled", c.coupling.enabled}, {"strength", c.coupling.strength}, {"width", c.coupling.width}}},
      {"noise_sigma", c.noise_sigma},
      {"seed", c.seed},
  };
}

inline void from_json(const nlohmann::json& j, SurrogateConfig& c) {
  if (j.value("format", std::string{}) != "smartskin-surrogate") {
    throw ConfigError("not a smartskin surrogate config (missing format tag)");
  }
  c.version = j.at("version").get<int>();
  const auto& flow = j.at("flow");
  c.flow.freestream_velocity = flow.at("freestream_velocity").get<double>();
  c.flow.density = flow.at("density").get<double>();
  c.flow.step_height = flow.at("step_height").get<double>();
  c.flow.shape_factor = flow.at("shape_factor").get<double>();
  c.freestream_pressure = flow.at("freestream_pressure").get<double>();
  const auto& taps = j.at("taps");
  taps.at("x_over_h").get_to(c.tap_x_over_h);
  taps.at("z_over_h").get_to(c.tap_z_over_h);
  c.area_per_tap = taps.at("area_per_tap").get<double>();
  taps.at("baseline_cp").get_to(c.baseline_cp);
  const auto& resp = j.at("response");
  resp.at("passive").get_to(c.passive);
  resp.at("active").get_to(c.active);
  resp.at("interaction").get_to(c.interaction);
  const auto& kernel = j.at("kernel");
  kernel.at("streamwise_shape").get_to(c.streamwise_shape);
  kernel.at("actuator_z_over_h").get_to(c.actuator_z_over_h);
  c.spanwise_width = kernel.at("spanwise_width").get<double>();
  c.side_attenuation = kernel.at("side_attenuation").get<double>();
  const auto& coupling = j.at("coupling");
  c.coupling.enabled = coupling.at("enabled").get<bool>();
  c.coupling.strength = coupling.at("strength").get<double>();
  c.coupling.width = coupling.at("width").get<double>();
  c.noise_sigma = j.at("noise_sigma").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
}

inline SurrogateConfig parse_surrogate_config(const std::string& text) {
  SurrogateConfig c;
  try {
    c = nlohmann::json::parse(text).get<SurrogateConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed surrogate config: ") + e.what());
  }
  c.validate();
  return c;
}

inline std::string dump_surrogate_config(const SurrogateConfig& c) { return nlohmann::json(c).dump(2) + "\n"; }

inline SurrogateConfig load_surrogate_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open surrogate config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_surrogate_config(ss.str());
}

inline void save_surrogate_config(const SurrogateConfig& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write surrogate config '" + path + "'");
  out << dump_surrogate_config(c);
}

/// Calibrated stand-in for the wind-tunnel plant.
///
/// Each spanwise column contributes a scalar response built from per-row tables and within-column
/// pairwise row interactions. Column responses are spread over the taps by a separable kernel
/// (streamwise shape x spanwise Gaussian) normalized so that the dimensionless cost of a pattern
/// equals the weighted sum of its column responses. With coupling disabled the plant is exactly
/// column-separable.
class SurrogatePlant final : public PlantEvaluator {
 public:
  static constexpr std::size_t kNominalSamples = 10240;  // 10 s at 1024 Hz

  explicit SurrogatePlant(SurrogateConfig config) : config_(std::move(config)), taps_(config_.tap_grid()) {
    config_.validate();
    q_ = config_.flow.dynamic_pressure();

    weighted_baseline_cp_ = 0.0;
    for (std::size_t t = 0; t < TapGrid::kTaps; ++t) weighted_baseline_cp_ += taps_.weights()[t] * config_.baseline_cp[t];

    double alpha_sum = 0.0;
    for (std::size_t c = 0; c < ActuatorGrid::columns; ++c) {
      column_weight_[c] = (c == 0 || c + 1 == ActuatorGrid::columns) ? config_.side_attenuation : 1.0;
      alpha_sum += column_weight_[c];
    }
    for (double& a : column_weight_) a /= alpha_sum;

    const double width = config_.spanwise_width;
    for (std::size_t c = 0; c < ActuatorGrid::columns; ++c) {
      double norm = 0.0;
      for (std::size_t s = 0; s < TapGrid::kStations; ++s) {
        for (std::size_t k = 0; k < TapGrid::kSpanwise; ++k) {
          const double dz = config_.tap_z_over_h[k] - config_.actuator_z_over_h[c];
          const double v = config_.streamwise_shape[s] * std::exp(-dz * dz / (2.0 * width * width));
          kernel_[c][TapGrid::index(s, k)] = v;
          norm += taps_.weights()[TapGrid::index(s, k)] * v;
        }
      }
      for (double& v : kernel_[c]) v /= norm;
    }

    const double cw = config_.coupling.width;
    for (std::size_t c = 0; c < ActuatorGrid::columns; ++c) {
      for (std::size_t d = 0; d < ActuatorGrid::columns; ++d) {
        const double dz = config_.actuator_z_over_h[c] - config_.actuator_z_over_h[d];
        coupling_kernel_[c][d] = c == d ? 0.0 : std::exp(-dz * dz / (2.0 * cw * cw));
      }
    }
  }

  const SurrogateConfig& config() const noexcept { return config_; }
  const TapGrid& taps() const override { return taps_; }
  const FlowConfig& flow() const override { return config_.flow; }
  bool supports_concurrent_evaluation() const override { return true; }
  bool separable() const noexcept { return !config_.coupling.enabled; }

  /// Relative weight of each column in the dimensionless cost (sums to 1).
  const std::array<double, ActuatorGrid::columns>& column_weights() const noexcept { return column_weight_; }

  static ColumnState column_state(const EffectivePattern& p, std::size_t column) {
    ColumnState s{};
    for (std::size_t r = 0; r < ActuatorGrid::rows; ++r) {
      const std::size_t i = ActuatorGrid::index(r, column);
      s[r] = actuator_state(p.height(i), p.active(i));
    }
    return s;
  }

  /// Uncoupled response of one column, in units of the dimensionless cost.
  double column_response(const ColumnState& s) const {
    double v = 0.0;
    for (std::size_t r = 0; r < ActuatorGrid::rows; ++r) {
      const int level = state_level(s[r]);
      v += config_.passive[r][level];
      if (state_blowing(s[r])) v += config_.active[r][level];
    }
    for (std::size_t r = 0; r < ActuatorGrid::rows; ++r) {
      for (std::size_t q = r + 1; q < ActuatorGrid::rows; ++q) {
        v += config_.interaction[row_pair_index(r, q)][s[r]][s[q]];
      }
    }
    return v;
  }

  /// Noiseless dimensionless cost computed directly from the column responses.
  double predicted_cost(const ActuationPattern& pattern) const {
    const auto r = column_contributions(effective_pattern(pattern));
    double sum = 0.0;
    for (double v : r) sum += v;
    return sum;
  }

  Measurement evaluate(const ActuationPattern& pattern, std::uint64_t seed) override {
    Measurement m = evaluate_noiseless(pattern);
    m.seed = seed;
    if (config_.noise_sigma > 0) {
      std::mt19937_64 rng(derive_seed(config_.seed, {seed}));
      std::normal_distribution<double> noise(0.0, config_.noise_sigma);
      for (double& p : m.mean_pressure) p += noise(rng);
    }
    return m;
  }

  Measurement evaluate_noiseless(const ActuationPattern& pattern) const {
    const auto r = column_contributions(effective_pattern(pattern));
    Measurement m;
    m.freestream_pressure = config_.freestream_pressure;
    m.sample_count = kNominalSamples;
    m.mean_pressure.resize(TapGrid::kTaps);
    for (std::size_t t = 0; t < TapGrid::kTaps; ++t) {
      double delta = 0.0;
      for (std::size_t c = 0; c < ActuatorGrid::columns; ++c) delta += r[c] * kernel_[c][t];
      const double cp = config_.baseline_cp[t] + weighted_baseline_cp_ * delta;
      m.mean_pressure[t] = config_.freestream_pressure + q_ * cp;
    }
    return m;
  }

  Measurement baseline() override { return evaluate_noiseless(ActuationPattern{}); }

 private:
  std::array<double, ActuatorGrid::columns> column_contributions(const EffectivePattern& p) const {
    std::array<double, ActuatorGrid::columns> g{};
    for (std::size_t c = 0; c < ActuatorGrid::columns; ++c) g[c] = column_response(column_state(p, c));
    std::array<double, ActuatorGrid::columns> r{};
    for (std::size_t c = 0; c < ActuatorGrid::columns; ++c) {
      double v = g[c];
      if (config_.coupling.enabled) {
        double cross = 0.0;
        for (std::size_t d = 0; d < ActuatorGrid::columns; ++d) cross += coupling_kernel_[c][d] * g[d];
        v += 0.5 * config_.coupling.strength * g[c] * cross;
      }
      r[c] = column_weight_[c] * v;
    }
    return r;
  }

  SurrogateConfig config_;
  TapGrid taps_;
  double q_ = 0.0;
  double weighted_baseline_cp_ = 0.0;
  std::array<double, ActuatorGrid::columns> column_weight_{};
  std::array<std::array<double, TapGrid::kTaps>, ActuatorGrid::columns> kernel_{};
  std::array<std::array<double, ActuatorGrid::columns>, ActuatorGrid::columns> coupling_kernel_{};
};

}  // namespace smartskin
