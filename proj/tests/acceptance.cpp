// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "cli.hpp"
#include "smartskin/mock_plant.hpp"
#include "support.hpp"

using namespace smartskin;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Checker {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) {
      outcome_.pass = false;
      if (failures_++ < 5) outcome_.detail += (outcome_.detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& s) {
    if (outcome_.pass) outcome_.detail += (outcome_.detail.empty() ? "" : "; ") + s;
  }
  Outcome result() const { return outcome_; }

 private:
  Outcome outcome_;
  int failures_ = 0;
};

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

// ---------------------------------------------------------------------------------------------

Outcome calibration_anchors() {
  Checker c;
  const auto start = Clock::now();
  SurrogatePlant plant(testing_support::noiseless_config());
  using testing_support::band;
  using testing_support::ja_star;
  const double off = ja_star(plant, ActuationPattern{});
  const double row2 = ja_star(plant, band({2}, 4, false));
  const double rows23 = ja_star(plant, band({2, 3}, 4, false));
  const double rows12 = ja_star(plant, band({1, 2}, 1, true));
  c.require(off == 0.0, "all-off J_a* = " + fmt(off, 17));
  c.require(std::abs(row2 + 0.36) <= 0.02, "row 2 L4 = " + fmt(row2));
  c.require(std::abs(rows23 + 0.43) <= 0.02, "rows 2-3 L4 = " + fmt(rows23));
  c.require(std::abs(rows12 + 0.91) <= 0.02, "rows 1-2 L1 blowing = " + fmt(rows12));
  const double t = seconds_since(start);
  c.require(t < 1.0, "runtime " + fmt(t, 2) + " s");
  c.note("off 0, row2 " + fmt(row2) + ", rows23 " + fmt(rows23) + ", rows12 blowing " + fmt(rows12));
  return c.result();
}

Outcome parametric_reproduction() {
  Checker c;
  const auto start = Clock::now();
  const fs::path dir = fs::temp_directory_path() / ("smartskin_accept_parametric_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run({"smartskin", "parametric", "--seed", "0", "--out", dir.string()}, out, err);
  const double t = seconds_since(start);
  c.require(code == 0, "exit code " + std::to_string(code) + ": " + err.str());
  if (code == 0) {
    std::ifstream in(dir / "study.csv");
    std::string line;
    std::getline(in, line);
    std::size_t cases = 0;
    std::size_t positive = 0;
    double best_passive = 1e300;
    double best_active = 1e300;
    std::string passive_label;
    std::string active_label;
    while (std::getline(in, line)) {
      ++cases;
      std::vector<std::string> f;
      std::stringstream ss(line);
      for (std::string s; f.size() < 5 && std::getline(ss, s, ',');) f.push_back(s);
      const double ja = std::stod(f[4]);
      positive += ja > 0 ? 1 : 0;
      const std::string label = f[1] + " L" + f[2];
      if (f[3] == "passive" && ja < best_passive) {
        best_passive = ja;
        passive_label = label;
      } else if (f[3] == "passive+active" && ja < best_active) {
        best_active = ja;
        active_label = label;
      }
    }
    const double frac = static_cast<double>(positive) / static_cast<double>(std::max<std::size_t>(cases, 1));
    c.require(cases == 120, std::to_string(cases) + " cases");
    c.require(passive_label == "2-3 L4", "best passive " + passive_label);
    c.require(active_label == "1-2 L1", "best passive+active " + active_label);
    c.require(frac >= 0.4 && frac <= 0.6, "positive fraction " + fmt(frac, 3));
    c.note("120 cases, best passive " + passive_label + " " + fmt(best_passive) + ", best active " + active_label +
           " " + fmt(best_active) + ", positive " + fmt(100 * frac, 1) + " %");
  }
  c.require(t < 5.0, "runtime " + fmt(t, 2) + " s");
  fs::remove_all(dir);
  return c.result();
}

CampaignResult table_one_campaign(SurrogatePlant& plant, std::uint64_t master, Algorithm algorithm) {
  SwarmConfig sc;
  sc.seed = master;
  sc.algorithm = algorithm;
  return run_campaign(sc, [&](std::size_t) { return std::make_unique<PlantObjective>(plant); });
}

Outcome optimization_benchmark() {
  Checker c;
  const auto start = Clock::now();
  constexpr std::uint64_t kMaster = 1;

  SurrogatePlant noisy(testing_support::default_config());
  const CampaignResult campaign = table_one_campaign(noisy, kMaster, Algorithm::pso_tpme);
  std::vector<double> at50;
  std::vector<double> finals;
  for (const RunResult& r : campaign.runs) {
    at50.push_back(r.curve.best_fitness[49]);
    finals.push_back(r.best_fitness);
  }
  const double med50 = median(at50);
  c.require(med50 < -0.91, "(a) median best after 50 iterations " + fmt(med50));
  const double lo = -1.477 - 0.05;
  const double hi = -1.213 + 0.05;
  for (std::size_t r = 0; r < finals.size(); ++r) {
    c.require(finals[r] >= lo && finals[r] <= hi, "(b) run " + std::to_string(r) + " final " + fmt(finals[r]));
  }

  SurrogatePlant clean(testing_support::noiseless_config());
  const double oracle = oracle_optimum(clean).ja_star;
  const CampaignResult exact = table_one_campaign(clean, kMaster, Algorithm::pso_tpme);
  int near = 0;
  std::string gaps;
  for (const RunResult& r : exact.runs) {
    const double gap = (r.best_fitness - oracle) / std::abs(oracle);
    c.require(r.best_fitness >= oracle, "(c) run below oracle " + fmt(r.best_fitness, 6));
    near += gap <= 0.05 ? 1 : 0;
    gaps += (gaps.empty() ? "" : "/") + fmt(100 * gap, 1);
  }
  c.require(near >= 4, "(c) " + std::to_string(near) + "/5 runs within 5 % of oracle");
  const double t = seconds_since(start);
  c.require(t < 120.0, "runtime " + fmt(t, 1) + " s for two campaigns");
  std::string fin;
  for (double f : finals) fin += (fin.empty() ? "" : "/") + fmt(f, 3);
  c.note("(a) median@50 " + fmt(med50) + "; (b) finals " + fin + "; (c) " + std::to_string(near) +
         "/5 within 5 % of " + fmt(oracle) + ", gaps % " + gaps + "; " + fmt(t, 1) + " s");
  return c.result();
}

Outcome oracle_soundness() {
  Checker c;
  const auto start = Clock::now();
  SurrogatePlant plant(testing_support::noiseless_config());
  const OracleResult oracle = oracle_optimum(plant);
  const double base = cost_Ja(plant.baseline(), plant.taps());
  std::mt19937_64 rng(derive_seed(4, {4}));
  std::uniform_int_distribution<int> level(0, kMaxHeightLevel);
  std::uniform_int_distribution<int> jet(0, 1);
  double best = std::numeric_limits<double>::infinity();
  constexpr std::size_t kSamples = 1'000'000;
  std::size_t violations = 0;
  for (std::size_t s = 0; s < kSamples; ++s) {
    ActuationPattern::Levels h{};
    ActuationPattern::Levels a{};
    for (std::size_t i = 0; i < ActuatorGrid::actuators; ++i) {
      h[i] = static_cast<std::uint8_t>(level(rng));
      a[i] = static_cast<std::uint8_t>(jet(rng));
    }
    const ActuationPattern eff = effective_pattern(ActuationPattern(h, a)).pattern();
    const double j = cost_Ja_star(cost_Ja(plant.evaluate_noiseless(eff), plant.taps()), base);
    violations += j < oracle.ja_star ? 1 : 0;
    best = std::min(best, j);
  }
  c.require(violations == 0, std::to_string(violations) + " random patterns beat the oracle");
  c.require(oracle.ja_star <= best, "oracle " + fmt(oracle.ja_star, 6) + " > sampled min " + fmt(best, 6));
  const double t = seconds_since(start);
  c.require(t < 30.0, "runtime " + fmt(t, 1) + " s");
  c.note("oracle " + fmt(oracle.ja_star) + " <= min of 10^6 samples " + fmt(best) + "; " + fmt(t, 1) + " s");
  return c.result();
}

bool legal(const ActuationPattern& p) {
  for (std::size_t i = 0; i < ActuatorGrid::actuators; ++i) {
    if (p.height(i) < 0 || p.height(i) > kMaxHeightLevel) return false;
    if (p.actives()[i] > 1) return false;
  }
  return true;
}

Outcome optimizer_invariants() {
  Checker c;
  SurrogatePlant plant(testing_support::default_config());
  int campaigns = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SwarmConfig sc = seed % 3 == 0 ? SwarmConfig::continuous_benchmark() : SwarmConfig{};
    sc.particles = 10;
    sc.iterations = 50;
    sc.runs = 2;
    sc.seed = seed;
    ObjectiveFactory factory;
    std::string kind;
    switch (seed % 3) {
      case 0:
        kind = "sphere";
        factory = [](std::size_t) { return std::make_unique<SphereObjective>(); };
        break;
      case 1:
        kind = "constant";
        factory = [](std::size_t) { return std::make_unique<ConstantObjective>(0.5); };
        break;
      default:
        kind = "surrogate";
        factory = [&](std::size_t) { return std::make_unique<PlantObjective>(plant); };
        break;
    }
    const std::string tag = kind + " seed " + std::to_string(seed);
    const CampaignResult a = run_campaign(sc, factory);
    const CampaignResult b = run_campaign(sc, factory);
    ++campaigns;
    for (std::size_t r = 0; r < a.runs.size(); ++r) {
      const RunResult& run = a.runs[r];
      const auto& curve = run.curve.best_fitness;
      for (std::size_t i = 1; i < curve.size(); ++i) {
        c.require(curve[i] <= curve[i - 1], tag + ": gbest rose at iteration " + std::to_string(i));
      }
      for (std::size_t it = 0; it < sc.iterations; ++it) {
        const auto first = run.curve.ledger.begin() + static_cast<std::ptrdiff_t>(it * sc.particles);
        const auto last = first + static_cast<std::ptrdiff_t>(sc.particles);
        const auto [lo, hi] =
            std::minmax_element(first, last, [](const auto& x, const auto& y) { return x.fitness < y.fitness; });
        c.require(lo->label != ParticleClass::bad, tag + ": arg-min labelled bad");
        c.require(hi->label != ParticleClass::good, tag + ": arg-max labelled good");
      }
      for (const auto& e : run.curve.ledger) {
        if (e.pattern) c.require(legal(*e.pattern), tag + ": illegal pattern");
      }
      c.require(kind == "sphere" || run.best_pattern.has_value(), tag + ": missing best pattern");
      const RunResult& twin = b.runs[r];
      c.require(twin.curve.best_fitness == curve, tag + ": learning curve not reproducible");
      c.require(twin.best_position == run.best_position, tag + ": best position not reproducible");
      bool same = twin.curve.ledger.size() == run.curve.ledger.size();
      for (std::size_t i = 0; same && i < run.curve.ledger.size(); ++i) {
        same = twin.curve.ledger[i].fitness == run.curve.ledger[i].fitness &&
               twin.curve.ledger[i].pattern == run.curve.ledger[i].pattern &&
               twin.curve.ledger[i].label == run.curve.ledger[i].label;
      }
      c.require(same, tag + ": ledger not reproducible");
    }
  }
  c.note(std::to_string(campaigns) + " mini-campaigns (P=10, IT=50, 2 runs each), zero violations");
  return c.result();
}

Outcome standard_pso_comparison() {
  Checker c;
  constexpr std::uint64_t kMaster = 1;
  SurrogatePlant plant(testing_support::default_config());
  const CampaignResult tpme = table_one_campaign(plant, kMaster, Algorithm::pso_tpme);
  const CampaignResult pso = table_one_campaign(plant, kMaster, Algorithm::standard_pso);
  std::vector<double> a;
  std::vector<double> b;
  for (std::size_t r = 0; r < tpme.runs.size(); ++r) {
    c.require(tpme.runs[r].seed == pso.runs[r].seed, "pair " + std::to_string(r) + " seeds differ");
    a.push_back(tpme.runs[r].best_fitness);
    b.push_back(pso.runs[r].best_fitness);
  }
  const double ma = median(a);
  const double mb = median(b);
  c.require(ma <= mb, "PSO-TPME median " + fmt(ma) + " > standard PSO median " + fmt(mb));
  c.note("5 paired runs: PSO-TPME median " + fmt(ma) + " <= standard PSO median " + fmt(mb));
  return c.result();
}

Outcome pod_properties() {
  Checker c;
  std::mt19937_64 rng(derive_seed(7, {7}));
  std::normal_distribution<double> g(0.0, 1.0);
  double worst_orth = 0;
  double worst_energy = 0;
  double worst_recon = 0;
  double worst_cov = 0;
  double worst_oracle = 0;
  for (int k = 0; k < 20; ++k) {
    const Eigen::Index n = 20 + 9 * k;
    const Eigen::Index m = 5 + (45 * k) / 19;  // 5..50 snapshots
    Eigen::MatrixXd s(n, m);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < m; ++j) s(i, j) = g(rng) / (1.0 + 0.1 * static_cast<double>(i)) + 3.0;
    const PodResult pod = snapshot_pod(s);
    const Eigen::Index r = pod.modes.cols();
    const std::string tag = "case " + std::to_string(k);
    c.require(r == std::min(n, m - 1), tag + ": rank " + std::to_string(r));
    const double orth = (pod.modes.transpose() * pod.modes - Eigen::MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff();
    const double energy = std::abs(pod.energy.sum() - 1.0);
    const double recon = (pod.reconstruct() - s).norm() / s.norm();
    Eigen::MatrixXd cov = pod.coefficients * pod.coefficients.transpose();
    cov.diagonal() -= pod.eigenvalues;
    const double covariance = cov.cwiseAbs().maxCoeff() / pod.eigenvalues(0);
    const Eigen::MatrixXd x = s.colwise() - s.rowwise().mean();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU);
    double oracle = 0;
    for (Eigen::Index j = 0; j < r; ++j) {
      const double sigma2 = svd.singularValues()(j) * svd.singularValues()(j);
      oracle = std::max(oracle, std::abs(pod.eigenvalues(j) - sigma2) / pod.eigenvalues(0));
      Eigen::VectorXd u = svd.matrixU().col(j);
      if (u.dot(pod.modes.col(j)) < 0) u = -u;
      oracle = std::max(oracle, (u - pod.modes.col(j)).cwiseAbs().maxCoeff());
    }
    worst_orth = std::max(worst_orth, orth);
    worst_energy = std::max(worst_energy, energy);
    worst_recon = std::max(worst_recon, recon);
    worst_cov = std::max(worst_cov, covariance);
    worst_oracle = std::max(worst_oracle, oracle);
  }
  c.require(worst_orth < 1e-10, "orthonormality residual " + std::to_string(worst_orth));
  c.require(worst_energy <= 1e-12, "energy sum error " + std::to_string(worst_energy));
  c.require(worst_recon < 1e-10, "reconstruction error " + std::to_string(worst_recon));
  c.require(worst_cov < 1e-10, "coefficient covariance off-diagonal " + std::to_string(worst_cov));
  c.require(worst_oracle < 1e-10, "SVD disagreement " + std::to_string(worst_oracle));
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "20 cases: orth %.1e, energy %.1e, recon %.1e, covariance %.1e, SVD agreement %.1e", worst_orth,
                worst_energy, worst_recon, worst_cov, worst_oracle);
  c.note(buf);
  return c.result();
}

Outcome mds_properties() {
  Checker c;
  std::mt19937_64 rng(derive_seed(8, {8}));
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0;
  for (int k = 0; k < 10; ++k) {
    const Eigen::Index n = 10 + 5 * k;
    Eigen::MatrixXd y(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      y(i, 0) = 2.0 * g(rng);
      y(i, 1) = 0.7 * g(rng);
    }
    Eigen::MatrixXd random(60, 2);
    for (Eigen::Index i = 0; i < 60; ++i) random.row(i) << g(rng), g(rng);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(random).householderQ() * Eigen::MatrixXd::Identity(60, 2);
    std::vector<std::vector<double>> pts;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::VectorXd x = q * y.row(i).transpose();
      x.array() += 5.0;
      pts.emplace_back(x.data(), x.data() + x.size());
    }
    const Embedding e = classical_mds(pts, 2);
    const Eigen::MatrixXd yc = y.rowwise() - y.colwise().mean();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(e.coordinates.transpose() * yc, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::MatrixXd rot = svd.matrixU() * svd.matrixV().transpose();
    worst = std::max(worst, (e.coordinates * rot - yc).norm() / yc.norm());
  }
  c.require(worst < 1e-8, "Procrustes residual " + std::to_string(worst));

  const Embedding same = classical_mds(std::vector<std::vector<double>>(6, std::vector<double>(60, 0.25)), 2);
  const double same_err = same.coordinates.cwiseAbs().maxCoeff();
  c.require(same_err <= 1e-10, "identical points spread " + std::to_string(same_err));

  const std::vector<std::vector<double>> tri{{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}};
  const Embedding t = classical_mds(tri, 2);
  double tri_err = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < i; ++j) tri_err = std::max(tri_err, std::abs((t.coordinates.row(i) - t.coordinates.row(j)).norm() - 1.0));
  tri_err = std::max({tri_err, std::abs(t.eigenvalues(0) - 0.5), std::abs(t.eigenvalues(1) - 0.5)});
  c.require(tri_err <= 1e-10, "equilateral triangle error " + std::to_string(tri_err));
  char buf[200];
  std::snprintf(buf, sizeof buf, "10 planted sets: Procrustes %.1e; identical %.1e; triangle %.1e", worst, same_err,
                tri_err);
  c.note(buf);
  return c.result();
}

Outcome geometry() {
  Checker c;
  const FlowConfig flow = testing_support::default_config().flow;
  const double h = flow.step_height;
  const double a = flow.shape_factor;
  const double e0 = std::abs(ramp_profile(0.0, flow) - h);
  const double e1 = std::abs(ramp_profile(2.0 * h / a, flow));
  const double e2 = std::abs(ramp_profile(h / a, flow) - h / 2.0);
  c.require(e0 <= 1e-12, "y(0) error " + std::to_string(e0));
  c.require(e1 <= 1e-12, "y(2H/a) error " + std::to_string(e1));
  c.require(e2 <= 1e-12, "y(H/a) error " + std::to_string(e2));
  char buf[160];
  std::snprintf(buf, sizeof buf, "y(0)=H %.1e, y(2H/a)=0 %.1e, y(H/a)=H/2 %.1e", e0, e1, e2);
  c.note(buf);
  return c.result();
}

template <class E, class F>
bool throws(F&& f) {
  try {
    f();
  } catch (const E&) {
    return true;
  } catch (...) {
    return false;
  }
  return false;
}

Outcome external_protocol() {
  using namespace std::chrono_literals;
  Checker c;
  const SurrogateConfig cfg = testing_support::noiseless_config();
  const ActuationPattern probe = testing_support::band({2, 3}, 4, false);
  {
    MockPlantServer server(cfg);
    ExternalPlant plant(server.endpoint(), cfg.tap_grid(), cfg.flow, 5000ms);
    SurrogatePlant local(cfg);
    const Measurement remote = plant.evaluate(probe, 0);
    const Measurement expected = local.evaluate_noiseless(probe);
    c.require(remote.mean_pressure == expected.mean_pressure, "loopback measurement differs from local surrogate");
    c.require(remote.freestream_pressure == expected.freestream_pressure, "loopback freestream differs");
  }
  {
    MockPlantServer server(cfg, {MockMode::short_response});
    ExternalPlant plant(server.endpoint(), cfg.tap_grid(), cfg.flow, 5000ms);
    c.require(throws<DimensionMismatch>([&] { plant.evaluate(probe, 0); }), "41-tap reply not rejected");
  }
  {
    MockPlantServer server(cfg, {MockMode::surrogate, 500ms});
    ExternalPlant plant(server.endpoint(), cfg.tap_grid(), cfg.flow, 100ms);
    c.require(throws<PlantTimeout>([&] { plant.evaluate(probe, 0); }), "slow reply did not time out");
    c.require(plant.desynchronized(), "channel not marked after timeout");
    c.require(throws<ConnectionError>([&] { plant.evaluate(probe, 1); }), "desynchronized channel reused");
    std::this_thread::sleep_for(600ms);
    c.require(server.responder().requests() == 1, "request was retried");
  }
  std::size_t calls = 0;
  {
    MockPlantServer server(cfg, {MockMode::surrogate, 5ms});
    ExternalPlant plant(server.endpoint(), cfg.tap_grid(), cfg.flow, 5000ms);
    std::vector<std::thread> threads;
    std::atomic<int> failures{0};
    for (int t = 0; t < 6; ++t) {
      threads.emplace_back([&] {
        for (int i = 0; i < 8; ++i) {
          try {
            plant.evaluate(probe, 0);
          } catch (...) {
            ++failures;
          }
        }
      });
    }
    for (auto& t : threads) t.join();
    calls = plant.evaluations();
    c.require(failures == 0, "concurrent evaluations failed");
    c.require(plant.max_in_flight() == 1, "client allowed " + std::to_string(plant.max_in_flight()) + " in flight");
    c.require(server.responder().overlap_violations() == 0, "mock saw overlapping requests");
    c.require(server.responder().requests() == 48, "mock saw " + std::to_string(server.responder().requests()));
  }
  c.note("round trip exact, 41-tap reply rejected, timeout marks channel without retry, " + std::to_string(calls) +
         " calls from 6 threads with max 1 in flight");
  return c.result();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"calibration anchors", calibration_anchors},
      {"parametric reproduction", parametric_reproduction},
      {"optimization benchmark", optimization_benchmark},
      {"oracle soundness", oracle_soundness},
      {"optimizer invariants", optimizer_invariants},
      {"standard PSO comparison", standard_pso_comparison},
      {"POD properties", pod_properties},
      {"MDS properties", mds_properties},
      {"geometry", geometry},
      {"external plant protocol", external_protocol},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS " : "FAIL ") << i + 1 << " " << criteria[i].first << ": " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
