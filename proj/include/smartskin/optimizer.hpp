#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "smartskin/envelope.hpp"
#include "smartskin/error.hpp"
#include "smartskin/objective.hpp"
#include "smartskin/pattern.hpp"
#include "smartskin/seed.hpp"

namespace smartskin {

using Position = std::array<double, kPositionDims>;

enum class ParticleClass : std::uint8_t { good, fair, bad };

inline std::string_view to_string(ParticleClass c) {
  switch (c) {
    case ParticleClass::good: return "good";
    case ParticleClass::fair: return "fair";
    case ParticleClass::bad: return "bad";
  }
  return "?";
}

enum class Algorithm { pso_tpme, standard_pso };

inline std::string_view to_string(Algorithm a) { return a == Algorithm::pso_tpme ? "pso-tpme" : "standard-pso"; }

inline Algorithm parse_algorithm(std::string_view s) {
  if (s == "pso-tpme") return Algorithm::pso_tpme;
  if (s == "standard-pso") return Algorithm::standard_pso;
  throw ConfigError("unknown algorithm '" + std::string(s) + "' (expected pso-tpme or standard-pso)");
}

struct Particle {
  Position position{};
  Position velocity{};
  double fitness = std::numeric_limits<double>::infinity();
  Position best_position{};
  double best_fitness = std::numeric_limits<double>::infinity();
  ParticleClass label = ParticleClass::fair;
  std::size_t bad_streak = 0;
};

struct SwarmConfig {
  std::size_t particles = 35;
  std::size_t iterations = 1000;
  std::size_t runs = 5;
  double inertia_start = 0.9;
  double inertia_end = 0.4;
  double c1 = 1.49;
  double c2 = 1.49;
  double c_class = 0.5;
  std::size_t patience = 1;
  // Mutation scale in position units (one height level or one jet state per unit).
  double mutation_start = 0.35;
  double mutation_end = 0.25;
  // Centre mutations on the rounded global best rather than its raw continuous position.
  bool mutate_on_lattice = true;
  PositionBounds bounds = PositionBounds::standard();
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::pso_tpme;
  std::size_t jobs = 1;

  /// Settings for smooth continuous test functions: no lattice snap, finer mutation.
  static SwarmConfig continuous_benchmark() {
    SwarmConfig c;
    c.mutate_on_lattice = false;
    c.mutation_start = 0.02;
    c.mutation_end = 1e-4;
    return c;
  }

  double inertia(std::size_t iteration) const { return lerp(inertia_start, inertia_end, iteration); }
  double mutation_scale(std::size_t iteration) const { return lerp(mutation_start, mutation_end, iteration); }

  void validate() const {
    if (particles < 3) throw ConfigError("swarm needs at least 3 particles");
    if (iterations < 1) throw ConfigError("at least one iteration is required");
    if (runs < 1) throw ConfigError("at least one run is required");
    if (!(c_class > 0 && c_class < 1)) throw ConfigError("classification spread factor must lie in (0, 1)");
    if (patience < 1) throw ConfigError("bad-patience must be at least 1");
    if (!(mutation_start >= mutation_end && mutation_end >= 0)) {
      throw ConfigError("mutation scale must be non-negative and non-increasing");
    }
    if (!(c1 >= 0 && c2 >= 0)) throw ConfigError("acceleration coefficients must be non-negative");
    if (jobs < 1) throw ConfigError("jobs must be at least 1");
    bounds.validate();
  }

 private:
  double lerp(double a, double b, std::size_t iteration) const {
    if (iterations <= 1) return a;
    return a + (b - a) * static_cast<double>(iteration) / static_cast<double>(iterations - 1);
  }
};

/// Labels each fitness good/fair/bad by additive spread around the mean (minimization).
inline std::vector<ParticleClass> classify(std::span<const double> fitness, double c_class) {
  std::vector<ParticleClass> labels(fitness.size(), ParticleClass::fair);
  if (fitness.empty()) return labels;
  const auto [lo, hi] = std::minmax_element(fitness.begin(), fitness.end());
  const double best = *lo;
  const double worst = *hi;
  if (!(worst > best)) return labels;
  double mean = 0.0;
  for (double f : fitness) mean += f;
  mean /= static_cast<double>(fitness.size());
  const double good_below = mean - c_class * (mean - best);
  const double bad_above = mean + c_class * (worst - mean);
  for (std::size_t i = 0; i < fitness.size(); ++i) {
    if (fitness[i] < good_below) {
      labels[i] = ParticleClass::good;
    } else if (fitness[i] > bad_above) {
      labels[i] = ParticleClass::bad;
    }
  }
  return labels;
}

/// Class-dependent velocity update followed by the move and the clamp.
///
/// good: cognitive pull only. fair: standard PSO. bad: social pull only, doubled.
/// Coordinates clamped to the bounds lose their velocity component.
template <class Rng>
Particle update_particle(Particle p, const Position& global_best, const SwarmConfig& config, double inertia,
                         Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t d = 0; d < kPositionDims; ++d) {
    const double r1 = unit(rng);
    const double r2 = unit(rng);
    const double cognitive = config.c1 * r1 * (p.best_position[d] - p.position[d]);
    const double social = config.c2 * r2 * (global_best[d] - p.position[d]);
    double v = inertia * p.velocity[d];
    switch (p.label) {
      case ParticleClass::good: v += cognitive; break;
      case ParticleClass::fair: v += cognitive + social; break;
      case ParticleClass::bad: v += 2.0 * social; break;
    }
    double x = p.position[d] + v;
    if (x < config.bounds.lower[d]) {
      x = config.bounds.lower[d];
      v = 0.0;
    } else if (x > config.bounds.upper[d]) {
      x = config.bounds.upper[d];
      v = 0.0;
    }
    p.position[d] = x;
    p.velocity[d] = v;
  }
  return p;
}

/// Relocates a persistently bad particle next to the global best. The personal best is kept.
template <class Rng>
Particle mutate_elitism(Particle p, const Position& global_best, double sigma, const PositionBounds& bounds,
                        bool on_lattice, Rng& rng) {
  Position centre = global_best;
  if (on_lattice) centre = encode_pattern(decode_position(global_best, bounds));
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t d = 0; d < kPositionDims; ++d) {
    const double x = centre[d] + (sigma > 0 ? sigma * gauss(rng) : 0.0);
    p.position[d] = std::clamp(x, bounds.lower[d], bounds.upper[d]);
    p.velocity[d] = 0.0;
  }
  p.bad_streak = 0;
  return p;
}

struct LedgerEntry {
  std::size_t run = 0;
  std::size_t iteration = 0;
  std::size_t particle = 0;
  std::optional<ActuationPattern> pattern;
  double fitness = 0.0;
  ParticleClass label = ParticleClass::fair;
};

struct LearningCurve {
  std::vector<double> best_fitness;     // best-so-far after each iteration
  std::vector<bool> best_is_new;        // the global best improved in this iteration
  std::vector<std::size_t> best_particle;  // holder of the global best after each iteration
  std::vector<LedgerEntry> ledger;      // every evaluation, in order
};

struct Swarm {
  std::vector<Particle> particles;
  Position best_position{};
  double best_fitness = std::numeric_limits<double>::infinity();
  std::optional<ActuationPattern> best_pattern;
  std::size_t best_particle = 0;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  std::mt19937_64 rng;
};

/// Positions uniform in the bounds, velocities uniform in +-10 % of each coordinate's range.
inline Swarm initialize_swarm(const SwarmConfig& config, std::uint64_t seed, std::size_t run = 0) {
  Swarm s;
  s.run = run;
  s.seed = seed;
  s.rng.seed(derive_seed(seed, {0x1417}));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  s.particles.resize(config.particles);
  for (Particle& p : s.particles) {
    for (std::size_t d = 0; d < kPositionDims; ++d) {
      p.position[d] = config.bounds.lower[d] + unit(s.rng) * config.bounds.range(d);
    }
    for (std::size_t d = 0; d < kPositionDims; ++d) {
      p.velocity[d] = (2.0 * unit(s.rng) - 1.0) * 0.1 * config.bounds.range(d);
    }
    p.best_position = p.position;
  }
  return s;
}

namespace detail {

inline std::vector<Evaluation> evaluate_all(Swarm& swarm, Objective& objective, std::size_t iteration,
                                            std::size_t jobs) {
  const std::size_t n = swarm.particles.size();
  std::vector<Evaluation> out(n);
  std::vector<std::exception_ptr> errors(n);
  auto work = [&](std::size_t i) {
    try {
      out[i] = objective.evaluate(swarm.particles[i].position, derive_seed(swarm.seed, {iteration, i}));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t workers = objective.supports_concurrent_evaluation() ? std::min(jobs, n) : 1;
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      work(i);
      if (errors[i]) break;
    }
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) work(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const PlantError&) {
      rethrow_with_context("run " + std::to_string(swarm.run) + ", iteration " + std::to_string(iteration) +
                           ", particle " + std::to_string(i) + ": ");
    }
  }
  return out;
}

inline void advance(Swarm& swarm, Objective& objective, const SwarmConfig& config, std::size_t iteration,
                    LearningCurve* curve, bool tpme) {
  const std::vector<Evaluation> evals = evaluate_all(swarm, objective, iteration, config.jobs);
  const std::size_t n = swarm.particles.size();

  std::vector<double> fitness(n);
  for (std::size_t i = 0; i < n; ++i) {
    Particle& p = swarm.particles[i];
    p.fitness = fitness[i] = evals[i].fitness;
    if (p.fitness < p.best_fitness) {
      p.best_fitness = p.fitness;
      p.best_position = p.position;
    }
  }
  bool improved = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (fitness[i] < swarm.best_fitness) {
      swarm.best_fitness = fitness[i];
      swarm.best_position = swarm.particles[i].position;
      swarm.best_pattern = evals[i].pattern;
      swarm.best_particle = i;
      improved = true;
    }
  }

  const std::vector<ParticleClass> labels =
      tpme ? classify(fitness, config.c_class) : std::vector<ParticleClass>(n, ParticleClass::fair);

  if (curve) {
    curve->best_fitness.push_back(swarm.best_fitness);
    curve->best_is_new.push_back(improved);
    curve->best_particle.push_back(swarm.best_particle);
    for (std::size_t i = 0; i < n; ++i) {
      curve->ledger.push_back(
          {swarm.run, iteration, i, evals[i].pattern, fitness[i], labels[i]});
    }
  }

  const double w = config.inertia(iteration);
  const double sigma = config.mutation_scale(iteration);
  for (std::size_t i = 0; i < n; ++i) {
    Particle& p = swarm.particles[i];
    p.label = labels[i];
    p.bad_streak = p.label == ParticleClass::bad ? p.bad_streak + 1 : 0;
    if (tpme && p.bad_streak >= config.patience) {
      p = mutate_elitism(std::move(p), swarm.best_position, sigma, config.bounds, config.mutate_on_lattice, swarm.rng);
    } else {
      p = update_particle(std::move(p), swarm.best_position, config, w, swarm.rng);
    }
  }
}

}  // namespace detail

/// One PSO-TPME generation: evaluate, update bests, classify, then mutate or move each particle.
inline void step(Swarm& swarm, Objective& objective, const SwarmConfig& config, std::size_t iteration,
                 LearningCurve* curve = nullptr) {
  detail::advance(swarm, objective, config, iteration, curve, true);
}

/// One standard PSO generation: every particle is fair and nobody is mutated.
inline void standard_pso_step(Swarm& swarm, Objective& objective, const SwarmConfig& config, std::size_t iteration,
                              LearningCurve* curve = nullptr) {
  detail::advance(swarm, objective, config, iteration, curve, false);
}

struct RunResult {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  LearningCurve curve;
  Position best_position{};
  double best_fitness = std::numeric_limits<double>::infinity();
  std::optional<ActuationPattern> best_pattern;
};

inline RunResult run_optimization(const SwarmConfig& config, Objective& objective, std::uint64_t seed,
                                  std::size_t run = 0) {
  config.validate();
  Swarm swarm = initialize_swarm(config, seed, run);
  RunResult result;
  result.run = run;
  result.seed = seed;
  result.curve.best_fitness.reserve(config.iterations);
  result.curve.ledger.reserve(config.iterations * config.particles);
  for (std::size_t it = 0; it < config.iterations; ++it) {
    if (config.algorithm == Algorithm::pso_tpme) {
      step(swarm, objective, config, it, &result.curve);
    } else {
      standard_pso_step(swarm, objective, config, it, &result.curve);
    }
  }
  result.best_position = swarm.best_position;
  result.best_fitness = swarm.best_fitness;
  result.best_pattern = swarm.best_pattern;
  return result;
}

/// Seed of run r of a campaign with the given master seed.
inline std::uint64_t run_seed(std::uint64_t master, std::size_t run) { return derive_seed(master, {run}); }

struct CampaignResult {
  std::vector<RunResult> runs;
  Envelope envelope;
  std::size_t best_run = 0;
};

using ObjectiveFactory = std::function<std::unique_ptr<Objective>(std::size_t run)>;

/// Independent runs from distinct sub-seeds. Each run gets its own objective from the factory;
/// runs execute concurrently only if jobs > 1 and the objectives allow concurrent evaluation.
inline CampaignResult run_campaign(const SwarmConfig& config, const ObjectiveFactory& make_objective) {
  config.validate();
  CampaignResult result;
  result.runs.resize(config.runs);
  std::vector<std::unique_ptr<Objective>> objectives;
  for (std::size_t r = 0; r < config.runs; ++r) objectives.push_back(make_objective(r));

  const bool concurrent = std::all_of(objectives.begin(), objectives.end(),
                                      [](const auto& o) { return o->supports_concurrent_evaluation(); });
  const std::size_t workers = concurrent ? std::min(config.jobs, config.runs) : 1;
  SwarmConfig per_run = config;
  if (workers > 1) per_run.jobs = 1;

  std::vector<std::exception_ptr> errors(config.runs);
  auto work = [&](std::size_t r) {
    try {
      result.runs[r] = run_optimization(per_run, *objectives[r], run_seed(config.seed, r), r);
    } catch (...) {
      errors[r] = std::current_exception();
    }
  };
  if (workers <= 1) {
    for (std::size_t r = 0; r < config.runs; ++r) {
      work(r);
      if (errors[r]) break;
    }
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t r = w; r < config.runs; r += workers) work(r);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<std::vector<double>> curves;
  for (const auto& run : result.runs) curves.push_back(run.curve.best_fitness);
  result.envelope = learning_envelope(curves);
  result.best_run = result.envelope.best_run;
  return result;
}

}  // namespace smartskin
