#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "smartskin/smartskin.hpp"

#ifndef SMARTSKIN_DATA_DIR
#define SMARTSKIN_DATA_DIR "data"
#endif

namespace smartskin::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kVersion = "1.0.0";

class IoError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw IoError("write to '" + path.string() + "' failed");
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
  const fs::path probe = dir / ".write-test";
  {
    std::ofstream f(probe);
    if (!f) throw IoError("output directory '" + dir.string() + "' is not writable");
  }
  fs::remove(probe, ec);
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

// Splits one CSV line, honouring double-quoted fields.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  bool in_quotes = false;
  for (char c : line) {
    if (c == '"') {
      in_quotes = !in_quotes;
    } else if (c == ',' && !in_quotes) {
      out.emplace_back();
    } else if (c != '\r') {
      out.back() += c;
    }
  }
  return out;
}

struct Common {
  std::string config_path;
  std::string plant = "surrogate";
  std::uint64_t seed = 1;
  double noise = -1.0;
  std::size_t jobs = 1;
  long timeout_ms = 30000;
  std::string out;
};

struct Context {
  SurrogateConfig config;
  std::string config_text;  // exactly what is written as the config copy
  std::unique_ptr<PlantEvaluator> plant;
  SurrogatePlant* surrogate = nullptr;
};

Context make_context(const Common& c, bool need_plant = true) {
  Context ctx;
  const std::string path = c.config_path.empty() ? default_config_path() : c.config_path;
  ctx.config = parse_surrogate_config(read_file(path));
  if (c.noise >= 0) ctx.config.noise_sigma = c.noise;
  ctx.config.validate();
  ctx.config_text = dump_surrogate_config(ctx.config);
  if (!need_plant) return ctx;
  if (c.plant == "surrogate") {
    auto p = std::make_unique<SurrogatePlant>(ctx.config);
    ctx.surrogate = p.get();
    ctx.plant = std::move(p);
  } else if (c.plant.rfind("external:", 0) == 0) {
    ctx.plant = std::make_unique<ExternalPlant>(c.plant.substr(9), ctx.config.tap_grid(), ctx.config.flow,
                                                std::chrono::milliseconds(c.timeout_ms));
  } else {
    throw ConfigError("unknown plant '" + c.plant + "' (expected surrogate or external:<endpoint>)");
  }
  return ctx;
}

class Manifest {
 public:
  Manifest(std::string command, const std::vector<std::string>& args, const Common& c, const Context& ctx)
      : started_(utc_now()) {
    j_["tool"] = "smartskin";
    j_["version"] = kVersion;
    j_["command"] = std::move(command);
    j_["arguments"] = std::vector<std::string>(args.begin() + 1, args.end());
    j_["config_source"] = c.config_path.empty() ? default_config_path() : c.config_path;
    j_["config_copy"] = "config.json";
    j_["config_sha256"] = sha256_hex(ctx.config_text);
    j_["master_seed"] = c.seed;
    j_["plant"] = c.plant;
  }

  nlohmann::json& operator[](const char* key) { return j_[key]; }
  void add_output(const std::string& name) { outputs_.push_back(name); }

  void write(const fs::path& dir, const Context& ctx) {
    write_file(dir / "config.json", ctx.config_text);
    j_["outputs"] = outputs_;
    j_["started_at"] = started_;
    j_["finished_at"] = utc_now();
    write_file(dir / "manifest.json", j_.dump(2) + "\n");
  }

 private:
  nlohmann::json j_;
  std::vector<std::string> outputs_;
  std::string started_;
};

double baseline_ja(PlantEvaluator& plant) {
  Measurement base = plant.baseline();
  base.validate(plant.taps().size());
  return cost_Ja(base, plant.taps());
}

void add_common(CLI::App* app, Common& c, bool plant_options) {
  app->add_option("--config", c.config_path, "Surrogate/geometry config file (JSON)");
  app->add_option("--seed", c.seed, "Master seed");
  if (plant_options) {
    app->add_option("--noise", c.noise, "Override tap noise standard deviation (Pa)");
    app->add_option("--plant", c.plant, "surrogate or external:<tcp:host:port|cmd:command>");
    app->add_option("--timeout-ms", c.timeout_ms, "External plant response timeout")->check(CLI::PositiveNumber);
  }
}

// ---------------------------------------------------------------------------------------------

int cmd_evaluate(const Common& c, const std::string& pattern_text, const std::string& pattern_file,
                 std::ostream& out) {
  if (pattern_text.empty() == pattern_file.empty()) {
    throw EncodingError("give exactly one of --pattern or --pattern-file");
  }
  const ActuationPattern p = parse_pattern(pattern_text.empty() ? read_file(pattern_file) : pattern_text);
  Context ctx = make_context(c);
  PlantEvaluator& plant = *ctx.plant;
  const double ja_base = baseline_ja(plant);
  Measurement m = plant.evaluate(effective_pattern(p).pattern(), c.seed);
  m.validate(plant.taps().size());
  const double ja = cost_Ja(m, plant.taps());
  out << "pattern " << to_string(p) << "\n";
  out << "J_a     " << format_double(ja) << "\n";
  out << "J_a*    " << format_double(cost_Ja_star(ja, ja_base)) << "\n";
  out << "J_b*    " << format_double(mean_height_ratio(p)) << "\n";
  out << "J_c*    " << format_double(active_fraction(p)) << "\n";
  const auto cp = cp_profile(m, plant.flow());
  const TapGrid& taps = plant.taps();
  const double h = plant.flow().step_height;
  char buf[64];
  out << "Cp      z/H:";
  for (double z : taps.z()) {
    std::snprintf(buf, sizeof buf, " %7.2f", z / h);
    out << buf;
  }
  out << "\n";
  for (std::size_t s = 0; s < TapGrid::kStations; ++s) {
    std::snprintf(buf, sizeof buf, "x/H %7.3f", taps.x()[s] / h);
    out << buf;
    for (std::size_t k = 0; k < TapGrid::kSpanwise; ++k) {
      std::snprintf(buf, sizeof buf, " %7.4f", cp[TapGrid::index(s, k)]);
      out << buf;
    }
    out << "\n";
  }
  return kSuccess;
}

int cmd_parametric(const Common& c, const std::vector<std::string>& args, std::ostream& out) {
  const fs::path dir(c.out);
  prepare_out_dir(dir);
  Context ctx = make_context(c);
  Manifest manifest("parametric", args, c, ctx);
  const StudyResult study = run_study(*ctx.plant, c.seed);

  std::ostringstream csv;
  csv << "case_id,rows,level,mode,Ja_star,Jb_star,Jc_star,pattern\n";
  std::ostringstream scatter;
  scatter << "case_id,mode,Ja_star,Jb_star,Jc_star\n";
  for (const CaseResult& r : study.cases) {
    csv << r.spec.id << ',' << r.spec.rows_label() << ',' << r.spec.level << ',' << to_string(r.spec.mode) << ','
        << format_double(r.ja_star) << ',' << format_double(r.jb_star) << ',' << format_double(r.jc_star) << ','
        << quoted(to_string(r.pattern)) << '\n';
    scatter << r.spec.id << ',' << to_string(r.spec.mode) << ',' << format_double(r.ja_star) << ','
            << format_double(r.jb_star) << ',' << format_double(r.jc_star) << '\n';
  }
  std::ostringstream best;
  for (std::size_t i : {study.best_passive, study.best_active}) {
    const CaseResult& r = study.cases[i];
    best << to_string(r.spec.mode) << " case_id=" << r.spec.id << " rows=" << r.spec.rows_label()
         << " level=" << r.spec.level << " Ja_star=" << format_double(r.ja_star) << '\n';
  }
  write_file(dir / "study.csv", csv.str());
  write_file(dir / "best_cases.txt", best.str());
  write_file(dir / "scatter.csv", scatter.str());
  for (const char* f : {"study.csv", "best_cases.txt", "scatter.csv"}) manifest.add_output(f);
  manifest["baseline_ja"] = study.baseline_ja;
  manifest.write(dir, ctx);

  out << "cases            " << study.cases.size() << "\n";
  out << "positive J_a*    " << format_double(study.positive_fraction()) << "\n";
  out << best.str();
  return kSuccess;
}

struct OptimizeOptions {
  std::size_t runs = 5;
  std::size_t iterations = 1000;
  std::size_t particles = 35;
  std::string algorithm = "pso-tpme";
  bool oracle = false;
  bool memoize = false;
  std::size_t mds_stride = 0;
};

std::size_t default_stride(std::size_t n) { return std::max<std::size_t>(1, (n + 1499) / 1500); }

int cmd_optimize(const Common& c, const OptimizeOptions& o, const std::vector<std::string>& args,
                 std::ostream& out) {
  const fs::path dir(c.out);
  prepare_out_dir(dir);
  Context ctx = make_context(c);
  if (o.oracle && (ctx.surrogate == nullptr || !ctx.surrogate->separable())) {
    throw ContractError("--oracle needs the surrogate plant with cross-column coupling disabled");
  }

  SwarmConfig sc;
  sc.runs = o.runs;
  sc.iterations = o.iterations;
  sc.particles = o.particles;
  sc.algorithm = parse_algorithm(o.algorithm);
  sc.seed = c.seed;
  sc.jobs = c.jobs;
  sc.validate();

  Manifest manifest("optimize", args, c, ctx);
  std::vector<std::uint64_t> seeds;
  for (std::size_t r = 0; r < sc.runs; ++r) seeds.push_back(run_seed(sc.seed, r));
  manifest["run_seeds"] = seeds;
  manifest["algorithm"] = o.algorithm;

  PlantEvaluator& plant = *ctx.plant;
  const CampaignResult result = run_campaign(sc, [&](std::size_t) {
    return std::make_unique<PlantObjective>(plant, sc.bounds, o.memoize);
  });

  std::ostringstream ledger;
  ledger << "run,iteration,particle,pattern,fitness,label\n";
  std::ostringstream bests;
  bests << "run,seed,best_fitness,pattern\n";
  for (const RunResult& run : result.runs) {
    std::ostringstream curve;
    curve << "iteration,best_fitness,best_is_new\n";
    for (std::size_t i = 0; i < run.curve.best_fitness.size(); ++i) {
      curve << i << ',' << format_double(run.curve.best_fitness[i]) << ',' << (run.curve.best_is_new[i] ? 1 : 0)
            << '\n';
    }
    const std::string name = "learning_curve_run" + std::to_string(run.run) + ".csv";
    write_file(dir / name, curve.str());
    manifest.add_output(name);
    for (const LedgerEntry& e : run.curve.ledger) {
      ledger << e.run << ',' << e.iteration << ',' << e.particle << ','
             << quoted(e.pattern ? to_string(*e.pattern) : std::string()) << ',' << format_double(e.fitness) << ','
             << to_string(e.label) << '\n';
    }
    bests << run.run << ',' << run.seed << ',' << format_double(run.best_fitness) << ','
          << quoted(run.best_pattern ? to_string(*run.best_pattern) : std::string()) << '\n';
  }
  std::ostringstream env;
  env << "iteration,min,max\n";
  for (std::size_t i = 0; i < result.envelope.min.size(); ++i) {
    env << i << ',' << format_double(result.envelope.min[i]) << ',' << format_double(result.envelope.max[i]) << '\n';
  }

  // Proximity map of the best run's evaluations.
  const RunResult& best = result.runs[result.best_run];
  const std::size_t stride = o.mds_stride ? o.mds_stride : default_stride(best.curve.ledger.size());
  std::vector<std::vector<double>> points;
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < best.curve.ledger.size(); i += stride) {
    const auto& e = best.curve.ledger[i];
    if (!e.pattern) continue;
    const auto x = rescale_for_embedding(*e.pattern);
    points.emplace_back(x.begin(), x.end());
    ids.push_back(i);
  }
  std::ostringstream emb;
  emb << "point_id,gamma1,gamma2,fitness\n";
  std::ostringstream spectrum;
  spectrum << "axis,eigenvalue,negative\n";
  if (points.size() >= 3) {
    const Embedding e = classical_mds(points, 2);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      emb << ids[i] << ',' << format_double(e.coordinates(row, 0)) << ',' << format_double(e.coordinates(row, 1))
          << ',' << format_double(best.curve.ledger[ids[i]].fitness) << '\n';
    }
    for (Eigen::Index k = 0; k < e.eigenvalues.size(); ++k) {
      spectrum << k + 1 << ',' << format_double(e.eigenvalues(k)) << ',' << (e.eigenvalues(k) < 0 ? 1 : 0) << '\n';
    }
  }

  std::ostringstream summary;
  summary << "algorithm " << o.algorithm << "\n";
  summary << "best_run " << result.best_run << "\n";
  summary << "best_fitness " << format_double(best.best_fitness) << "\n";
  summary << "best_pattern " << (best.best_pattern ? to_string(*best.best_pattern) : std::string()) << "\n";
  if (o.oracle) {
    const OracleResult oracle = oracle_optimum(*ctx.surrogate);
    summary << "oracle_value " << format_double(oracle.ja_star) << "\n";
    summary << "oracle_pattern " << to_string(oracle.pattern) << "\n";
    for (const RunResult& run : result.runs) {
      summary << "oracle_gap_run" << run.run << ' '
              << format_double((run.best_fitness - oracle.ja_star) / std::abs(oracle.ja_star)) << "\n";
    }
  }

  write_file(dir / "ledger.csv", ledger.str());
  write_file(dir / "best_patterns.csv", bests.str());
  write_file(dir / "envelope.csv", env.str());
  write_file(dir / "embedding.csv", emb.str());
  write_file(dir / "embedding_spectrum.csv", spectrum.str());
  write_file(dir / "summary.txt", summary.str());
  for (const char* f : {"ledger.csv", "best_patterns.csv", "envelope.csv", "embedding.csv", "embedding_spectrum.csv",
                        "summary.txt"}) {
    manifest.add_output(f);
  }
  manifest["mds_stride"] = stride;
  manifest.write(dir, ctx);

  out << summary.str();
  for (const RunResult& run : result.runs) {
    out << "run " << run.run << " final " << format_double(run.best_fitness) << "\n";
  }
  return kSuccess;
}

int cmd_oracle(const Common& c, const std::vector<std::string>& args, std::ostream& out) {
  Context ctx = make_context(c);
  if (!ctx.surrogate) throw ContractError("the oracle is only defined for the surrogate plant");
  const OracleResult r = oracle_optimum(*ctx.surrogate);
  std::ostringstream report;
  report << "pattern " << to_string(r.pattern) << "\n";
  report << "J_a* " << format_double(r.ja_star) << "\n";
  for (std::size_t col = 0; col < r.column_cost.size(); ++col) {
    report << "column " << col << ' ' << format_double(r.column_cost[col]) << "\n";
  }
  if (!c.out.empty()) {
    const fs::path dir(c.out);
    prepare_out_dir(dir);
    Manifest manifest("oracle", args, c, ctx);
    write_file(dir / "oracle.txt", report.str());
    manifest.add_output("oracle.txt");
    manifest.write(dir, ctx);
  }
  out << report.str();
  return kSuccess;
}

struct AnalyzeOptions {
  std::string ledger;
  long run = -1;
  std::size_t mds_stride = 0;
  std::string snapshots;
};

std::string matrix_text(const Eigen::MatrixXd& m, const std::string& header) {
  std::ostringstream s;
  s << header << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) s << (j ? "," : "") << format_double(m(i, j));
    s << '\n';
  }
  return s.str();
}

int cmd_analyze(const Common& c, const AnalyzeOptions& o, const std::vector<std::string>& args,
                std::ostream& out) {
  if (o.ledger.empty() && o.snapshots.empty()) throw ConfigError("analyze needs --ledger and/or --snapshots");
  const fs::path dir(c.out);
  prepare_out_dir(dir);
  Context ctx = make_context(c, false);
  Manifest manifest("analyze", args, c, ctx);

  if (!o.ledger.empty()) {
    std::istringstream in(read_file(o.ledger));
    std::string line;
    std::getline(in, line);
    if (split_csv(line).size() != 6 || split_csv(line)[3] != "pattern") {
      throw ConfigError("'" + o.ledger + "' is not an evaluation ledger");
    }
    struct Row {
      long run;
      std::string pattern;
      double fitness;
    };
    std::vector<Row> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto f = split_csv(line);
      double fit = 0.0;
      if (f.size() != 6 || !parse_double(f[4], fit)) {
        throw ConfigError("ledger line " + std::to_string(lineno) + " is malformed");
      }
      rows.push_back({std::stol(f[0]), f[3], fit});
    }
    if (rows.empty()) throw ConfigError("ledger '" + o.ledger + "' has no entries");
    long run = o.run;
    if (run < 0) {
      run = std::min_element(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.fitness < b.fitness; })
                ->run;
    }
    std::vector<const Row*> selected;
    for (const Row& r : rows) {
      if (r.run == run && !r.pattern.empty()) selected.push_back(&r);
    }
    const std::size_t stride = o.mds_stride ? o.mds_stride : default_stride(selected.size());
    std::vector<std::vector<double>> points;
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < selected.size(); i += stride) {
      const auto x = rescale_for_embedding(parse_pattern(selected[i]->pattern));
      points.emplace_back(x.begin(), x.end());
      ids.push_back(i);
    }
    const Embedding e = classical_mds(points, 2);
    std::ostringstream emb;
    emb << "point_id,gamma1,gamma2,fitness\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      emb << ids[i] << ',' << format_double(e.coordinates(row, 0)) << ',' << format_double(e.coordinates(row, 1))
          << ',' << format_double(selected[ids[i]]->fitness) << '\n';
    }
    write_file(dir / "embedding.csv", emb.str());
    manifest.add_output("embedding.csv");
    manifest["embedding_run"] = run;
    manifest["mds_stride"] = stride;
    out << "embedding " << ids.size() << " points from run " << run << "\n";
  }

  if (!o.snapshots.empty()) {
    std::istringstream in(read_file(o.snapshots));
    std::string line;
    std::vector<std::vector<double>> snaps;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto f = split_csv(line);
      std::vector<double> v(f.size());
      bool numeric = true;
      for (std::size_t i = 0; i < f.size() && numeric; ++i) numeric = parse_double(detail::trim(f[i]), v[i]);
      if (!numeric) {
        if (lineno == 1) continue;  // header
        throw ConfigError("snapshot line " + std::to_string(lineno) + " is not numeric");
      }
      snaps.push_back(std::move(v));
    }
    const PodResult pod = snapshot_pod(snaps);
    std::ostringstream energy;
    energy << "mode,eigenvalue,energy,cumulative\n";
    for (Eigen::Index m = 0; m < pod.energy.size(); ++m) {
      energy << m + 1 << ',' << format_double(pod.eigenvalues(m)) << ',' << format_double(pod.energy(m)) << ','
             << format_double(pod.cumulative_energy(m)) << '\n';
    }
    write_file(dir / "pod_mean.csv", matrix_text(pod.mean, "mean"));
    write_file(dir / "pod_modes.csv",
               matrix_text(pod.modes, "modes: one column per mode, one row per field point"));
    write_file(dir / "pod_coefficients.csv",
               matrix_text(pod.coefficients, "coefficients: one row per mode, one column per snapshot"));
    write_file(dir / "pod_energy.csv", energy.str());
    for (const char* f : {"pod_mean.csv", "pod_modes.csv", "pod_coefficients.csv", "pod_energy.csv"}) {
      manifest.add_output(f);
    }
    out << "pod " << snaps.size() << " snapshots, " << pod.energy.size() << " modes\n";
  }
  manifest.write(dir, ctx);
  return kSuccess;
}

}  // namespace

std::string default_config_path() { return std::string(SMARTSKIN_DATA_DIR) + "/surrogate_default.json"; }

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[digest[i] >> 4];
    s += hex[digest[i] & 0xf];
  }
  return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Smart Skin actuation optimization toolkit", "smartskin");
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common common;
  std::string pattern_text;
  std::string pattern_file;
  OptimizeOptions opt;
  AnalyzeOptions ana;

  auto* evaluate = app.add_subcommand("evaluate", "Measure one actuation pattern");
  add_common(evaluate, common, true);
  evaluate->add_option("--pattern", pattern_text, "60 comma-separated levels: 30 heights then 30 jets");
  evaluate->add_option("--pattern-file", pattern_file, "File holding the pattern text");

  auto* parametric = app.add_subcommand("parametric", "Run the 120-case row-band study");
  add_common(parametric, common, true);
  parametric->add_option("--out", common.out, "Output directory")->required();

  auto* optimize = app.add_subcommand("optimize", "Run an optimization campaign");
  add_common(optimize, common, true);
  optimize->add_option("--out", common.out, "Output directory")->required();
  optimize->add_option("--runs", opt.runs, "Independent runs")->check(CLI::PositiveNumber);
  optimize->add_option("--iterations", opt.iterations, "Generations per run")->check(CLI::PositiveNumber);
  optimize->add_option("--particles", opt.particles, "Swarm size")->check(CLI::Range(3, 100000));
  optimize->add_option("--algorithm", opt.algorithm, "pso-tpme or standard-pso")
      ->check(CLI::IsMember({"pso-tpme", "standard-pso"}));
  optimize->add_flag("--oracle", opt.oracle, "Also report the gap to the exact optimum");
  optimize->add_flag("--memoize", opt.memoize, "Cache repeated patterns (noiseless benchmarking)");
  optimize->add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber);
  optimize->add_option("--mds-stride", opt.mds_stride, "Ledger subsampling stride for the proximity map");

  auto* oracle = app.add_subcommand("oracle", "Exact optimum of a separable surrogate");
  add_common(oracle, common, true);
  oracle->add_option("--out", common.out, "Optional output directory");

  auto* analyze = app.add_subcommand("analyze", "Proximity map of a ledger and/or snapshot POD");
  add_common(analyze, common, false);
  analyze->add_option("--out", common.out, "Output directory")->required();
  analyze->add_option("--ledger", ana.ledger, "Evaluation ledger CSV");
  analyze->add_option("--run", ana.run, "Run to embed (default: run holding the best fitness)");
  analyze->add_option("--mds-stride", ana.mds_stride, "Ledger subsampling stride");
  analyze->add_option("--snapshots", ana.snapshots, "Snapshot CSV, one snapshot per line");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  try {
    if (*evaluate) return cmd_evaluate(common, pattern_text, pattern_file, out);
    if (*parametric) return cmd_parametric(common, args, out);
    if (*optimize) return cmd_optimize(common, opt, args, out);
    if (*oracle) return cmd_oracle(common, args, out);
    if (*analyze) return cmd_analyze(common, ana, args, out);
  } catch (const ContractError& e) {
    err << "refused: " << e.what() << "\n";
    return kContractRefusal;
  } catch (const PlantError& e) {
    err << "plant error: " << e.what() << "\n";
    return kPlantError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace smartskin::cli
