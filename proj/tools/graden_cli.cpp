#include <graden/manifest.hpp>
#include <graden/transforms.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace graden;

namespace {

// Bad flag values and combinations: exit 2 like CLI11's own parse errors.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MeasureFlags {
  std::optional<double> a, b, delta, gamma, r;
  std::optional<int> m, bins;

  void add_to(CLI::App* app) {
    app->add_option("--a", a, "GradEn quantile level for delta, in (0.5, 0.75)");
    app->add_option("--b", b, "GradEn quantile level for gamma, in (0.75, 1)");
    app->add_option("--delta", delta, "GradEn raw dead-band threshold (with --gamma)");
    app->add_option("--gamma", gamma, "GradEn raw large-gradient threshold (with --delta)");
    app->add_option("--m", m, "window size for sampen2d and distren2d");
    app->add_option("--bins", bins, "histogram bins for distren2d");
    app->add_option("--r", r, "sampen2d tolerance as a fraction of the image std");
  }

  // Appends the flags that apply to the spec's measure as key=value
  // overrides; later keys win when the spec is parsed.
  MeasureSpec apply(std::string text) const {
    Measure kind;
    try {
      kind = parse_measure(text.substr(0, text.find(':')));
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    if ((a || b) && (delta || gamma)) throw UsageError("--a/--b and --delta/--gamma are mutually exclusive");
    std::vector<std::string> extra;
    const auto put = [&](const char* key, const auto& v) {
      if (v) extra.push_back(std::string(key) + "=" + format_double(static_cast<double>(*v)));
    };
    switch (kind) {
      case Measure::GradEn:
        put("a", a);
        put("b", b);
        put("delta", delta);
        put("gamma", gamma);
        break;
      case Measure::SampEn2D:
        put("m", m);
        put("r", r);
        break;
      case Measure::DistrEn2D:
        put("m", m);
        put("bins", bins);
        break;
      case Measure::PerEn2D: break;
    }
    if (!extra.empty()) {
      text += text.find(':') == std::string::npos ? ":" : ";";
      for (std::size_t i = 0; i < extra.size(); ++i) text += (i ? ";" : "") + extra[i];
    }
    try {
      return MeasureSpec::parse(text);
    } catch (const RangeError& e) {
      throw UsageError(e.what());
    }
  }

  std::vector<MeasureSpec> apply_all(const std::vector<std::string>& texts) const {
    std::vector<MeasureSpec> out;
    for (const auto& t : texts) out.push_back(apply(t));
    return out;
  }
};

struct Common {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "csv";
  unsigned threads = 0;

  void add_to(CLI::App* app, bool with_seed = true) {
    if (with_seed) app->add_option("--seed", seed, "master seed (default: $GRADEN_SEED, else 0)");
    app->add_option("--out", out, "output path; extra tables go next to it");
    app->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--threads", threads, "worker threads, 0 = all cores (results do not depend on it)");
  }

  std::uint64_t resolved_seed() const {
    if (seed) return *seed;
    const char* env = std::getenv("GRADEN_SEED");
    if (env == nullptr || *env == '\0') return 0;
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      return v;
    } catch (const std::exception&) {
      throw UsageError(std::string("GRADEN_SEED is not an unsigned integer: '") + env + "'");
    }
  }
};

json table_json(const CsvTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) rows.push_back(r);
  return {{"header", t.header}, {"rows", rows}};
}

// Writes the tables and returns the paths written. CSV: the first table to
// `out`, the rest to <stem>.<name>.csv beside it. JSON: one document.
std::vector<std::string> write_tables(const fs::path& out, const std::string& format, const ExperimentOutput& result) {
  if (format == "json") {
    json doc = json::object();
    for (const auto& t : result.tables) doc[t.name] = table_json(t.table);
    atomic_write(out, doc.dump(2) + "\n");
    return {out.string()};
  }
  std::vector<std::string> written;
  for (std::size_t i = 0; i < result.tables.size(); ++i) {
    fs::path p = out;
    if (i > 0) {
      p = out.parent_path() / (out.stem().string() + "." + result.tables[i].name + ".csv");
    }
    atomic_write(p, result.tables[i].table.to_string());
    written.push_back(p.string());
  }
  return written;
}

fs::path manifest_path(const fs::path& out) {
  fs::path p = out;
  p += ".manifest.json";
  return p;
}

fs::path default_out(const std::string& experiment, const std::string& format) {
  return experiment + (format == "json" ? ".json" : ".csv");
}

void run_and_record(const std::string& experiment, const Common& common, const json& parameters,
                    const std::function<ExperimentOutput()>& run) {
  const fs::path out = common.out.empty() ? default_out(experiment, common.format) : fs::path(common.out);
  Manifest m;
  m.experiment = experiment;
  m.seed = common.resolved_seed();
  m.parameters = parameters;
  m.format = common.format;
  m.created = utc_timestamp();
  const auto start = std::chrono::steady_clock::now();
  const auto result = run();
  m.durations["run_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  m.outputs = write_tables(out, common.format, result);
  atomic_write(manifest_path(out), to_json(m).dump(2) + "\n");
  std::cerr << "wrote " << out.string() << " (+" << m.outputs.size() - 1 << " tables) and "
            << manifest_path(out).string() << "\n";
}

GrayImage load_input(const fs::path& path, bool signal, Eigen::Index embedding) {
  if (!signal) return load_image(path);
  return distance_matrix(load_signal(path), embedding);
}

std::string fixed6(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

int cmd_compute(const std::string& path, const std::string& measure, const MeasureFlags& flags, const Common& common,
                bool signal, Eigen::Index embedding) {
  const auto spec = flags.apply(measure);
  const GrayImage image = load_input(path, signal, embedding);
  const double value = spec(image);
  std::cout << fixed6(value) << "\n";
  if (common.out.empty()) return 0;

  if (common.format == "json") {
    json doc{{"source", path},
             {"measure", std::string(to_string(spec.measure))},
             {"params", describe_params(spec.measure, spec.params)},
             {"rows", image.rows()},
             {"cols", image.cols()}};
    doc["value"] = std::isnan(value) ? json(nullptr) : json(value);
    switch (spec.measure) {
      case Measure::GradEn: {
        const auto h = gradient_histogram(image, spec.params.thresholds);
        doc["delta"] = spec.params.thresholds.delta;
        doc["gamma"] = spec.params.thresholds.gamma;
        doc["histogram"] = h.counts;
        break;
      }
      case Measure::SampEn2D: {
        const auto c = sampen2d_counts(image, spec.params.sampen);
        doc["matches"] = {{"a", c.a}, {"b", c.b}};
        break;
      }
      case Measure::DistrEn2D: doc["histogram"] = distren2d_histogram(image, spec.params.distren); break;
      case Measure::PerEn2D: doc["histogram"] = peren2d_histogram(image); break;
    }
    atomic_write(common.out, doc.dump(2) + "\n");
  } else {
    CsvTable t{{"source", "measure", "params", "value"},
               {{path, std::string(to_string(spec.measure)), describe_params(spec.measure, spec.params),
                 format_double(value)}}};
    atomic_write(common.out, t.to_string());
  }
  return 0;
}

GrayImage rescale_to_bytes(const GrayImage& x) {
  const double lo = x.minCoeff(), hi = x.maxCoeff();
  if (hi == lo) return GrayImage::Zero(x.rows(), x.cols());
  return ((x.array() - lo) * (255.0 / (hi - lo))).matrix();
}

void write_image(const fs::path& out, const GrayImage& image) {
  std::string ext = out.extension().string();
  if (ext == ".pgm") {
    write_pgm(out, rescale_to_bytes(image));
  } else if (ext == ".png") {
    write_png(out, Raster{{rescale_to_bytes(image)}});
  } else {
    atomic_write(out, matrix_to_csv(image));
  }
}

struct SimulateArgs {
  std::string kind;
  std::string color = "white";
  std::optional<double> beta;
  double p = 0.5;
  Eigen::Index rows = 100, cols = 100;
  double a = 4.0, x0 = 0.3;
  Eigen::Index n = 150, burn_in = 0, embedding = 3;
};

int cmd_simulate(const SimulateArgs& s, const Common& common) {
  if (common.out.empty()) throw UsageError("simulate needs --out");
  const std::uint64_t seed = common.resolved_seed();
  if (s.kind == "noise") {
    double beta = 0;
    try {
      beta = s.beta ? *s.beta : spectral_exponent(parse_noise_color(s.color));
    } catch (const RangeError& e) {
      throw UsageError(e.what());
    }
    write_image(common.out, noise_image({beta, s.rows, s.cols, seed}));
  } else if (s.kind == "mix") {
    write_image(common.out, mix2d({s.p, s.rows, s.cols, seed}));
  } else if (s.kind == "logistic") {
    const auto x = logistic_series({s.a, s.x0, s.n, s.burn_in});
    std::string text;
    for (Eigen::Index i = 0; i < x.size(); ++i) text += format_double(x[i]) + "\n";
    atomic_write(common.out, text);
  } else {
    write_image(common.out, distance_matrix(logistic_series({s.a, s.x0, s.n, s.burn_in}), s.embedding));
  }
  std::cerr << "wrote " << common.out << "\n";
  return 0;
}

std::vector<NoiseColor> parse_colors(const std::vector<std::string>& names) {
  std::vector<NoiseColor> out;
  try {
    for (const auto& n : names) out.push_back(parse_noise_color(n));
  } catch (const RangeError& e) {
    throw UsageError(e.what());
  }
  return out;
}

int cmd_rerun(const std::string& path, const Common& common) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("manifest not found: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ManifestError("manifest " + path + " is not valid JSON: " + e.what());
  }
  std::vector<std::string> warnings;
  Manifest m = parse_manifest(j, warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  warnings.clear();
  const fs::path out = common.out.empty() ? default_out(m.experiment, m.format) : fs::path(common.out);
  const auto start = std::chrono::steady_clock::now();
  const auto result = run_manifest(m, warnings, common.threads);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  m.created = utc_timestamp();
  m.durations = json::object();
  m.durations["run_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  m.outputs = write_tables(out, m.format, result);
  atomic_write(manifest_path(out), to_json(m).dump(2) + "\n");
  std::cerr << "wrote " << out.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient entropy of images and signals, with baseline measures and experiments"};
  app.set_version_flag("--version", GRADEN_VERSION);
  app.require_subcommand(1);
  MeasureFlags flags;
  Common common;

  // compute
  auto* compute = app.add_subcommand("compute", "entropy of one image (or signal with --signal)");
  std::string input, measure = "graden";
  bool signal = false;
  Eigen::Index embedding = 3;
  compute->add_option("input", input, "image (PGM/PPM/PNG/CSV matrix) or signal file")->required();
  compute->add_option("--measure", measure, "graden, sampen2d, distren2d or peren2d; may carry key=value params");
  compute->add_flag("--signal", signal, "treat input as a 1D signal and use its distance matrix");
  compute->add_option("--embedding", embedding, "embedding dimension for --signal")->check(CLI::PositiveNumber);
  flags.add_to(compute);
  common.add_to(compute, false);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "write a simulated image or series");
  SimulateArgs sim;
  simulate->add_option("kind", sim.kind, "noise, mix, logistic or distance")
      ->required()
      ->check(CLI::IsMember({"noise", "mix", "logistic", "distance"}));
  simulate->add_option("--color", sim.color, "white, pink, red or blue");
  simulate->add_option("--beta", sim.beta, "spectral exponent (overrides --color)");
  simulate->add_option("--p", sim.p, "MIX mixing probability");
  simulate->add_option("--rows", sim.rows)->check(CLI::PositiveNumber);
  simulate->add_option("--cols", sim.cols)->check(CLI::PositiveNumber);
  simulate->add_option("--a", sim.a, "logistic map parameter");
  simulate->add_option("--x0", sim.x0, "logistic map start value");
  simulate->add_option("--n", sim.n, "logistic series length");
  simulate->add_option("--burn-in", sim.burn_in);
  simulate->add_option("--embedding", sim.embedding)->check(CLI::PositiveNumber);
  common.add_to(simulate);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "GradEn over a grid of quantile levels (a, b)");
  SweepConfig sweep_cfg;
  std::string sweep_color = "white";
  sweep->add_option("--rows", sweep_cfg.rows)->check(CLI::PositiveNumber);
  sweep->add_option("--cols", sweep_cfg.cols)->check(CLI::PositiveNumber);
  sweep->add_option("--color", sweep_color);
  sweep->add_option("--a-start", sweep_cfg.a_start);
  sweep->add_option("--a-stop", sweep_cfg.a_stop);
  sweep->add_option("--b-start", sweep_cfg.b_start);
  sweep->add_option("--b-stop", sweep_cfg.b_stop);
  sweep->add_option("--step", sweep_cfg.step);
  common.add_to(sweep);

  // noise-class
  auto* noise = app.add_subcommand("noise-class", "measures on white, pink, blue and red noise");
  NoiseClassConfig noise_cfg;
  std::vector<std::string> noise_measures{"graden"};
  std::vector<std::string> noise_colors{"white", "pink", "blue", "red"};
  noise->add_option("--samples", noise_cfg.samples);
  noise->add_option("--rows", noise_cfg.rows)->check(CLI::PositiveNumber);
  noise->add_option("--cols", noise_cfg.cols)->check(CLI::PositiveNumber);
  noise->add_option("--colors", noise_colors)->delimiter(',');
  noise->add_option("--measure", noise_measures, "measure spec, repeatable or comma separated")->delimiter(',');
  flags.add_to(noise);
  common.add_to(noise);

  // robustness
  auto* robust = app.add_subcommand("robustness", "CV of measures across sizes (size) or MIX noise levels (mix)");
  std::string robust_kind = "size";
  RobustnessConfig robust_cfg;
  MixRobustnessConfig mix_cfg;
  std::vector<std::string> robust_measures;
  std::vector<std::string> robust_colors{"white", "pink"};
  robust->add_option("--kind", robust_kind)->check(CLI::IsMember({"size", "mix"}));
  robust->add_option("--sizes", robust_cfg.sizes, "image sides (size)")->delimiter(',');
  robust->add_option("--colors", robust_colors, "noise colors (size)")->delimiter(',');
  robust->add_option("--p", mix_cfg.p_values, "MIX p values (mix)")->delimiter(',');
  robust->add_option("--variances", mix_cfg.variances, "added noise variances (mix)")->delimiter(',');
  robust->add_option("--rows", mix_cfg.rows, "MIX image rows (mix)")->check(CLI::PositiveNumber);
  robust->add_option("--cols", mix_cfg.cols, "MIX image cols (mix)")->check(CLI::PositiveNumber);
  std::optional<std::size_t> robust_samples;
  robust->add_option("--samples", robust_samples, "images per group (default 100 size, 30 mix)");
  robust->add_option("--measure", robust_measures, "measure spec, repeatable or comma separated")->delimiter(',');
  flags.add_to(robust);
  common.add_to(robust);

  // logistic
  auto* logistic = app.add_subcommand("logistic", "measures on logistic-map distance matrices");
  LogisticConfig log_cfg;
  std::vector<std::string> log_measures;
  logistic->add_option("--a-start", log_cfg.a_start);
  logistic->add_option("--a-stop", log_cfg.a_stop);
  logistic->add_option("--step", log_cfg.step);
  logistic->add_option("--n", log_cfg.n);
  logistic->add_option("--embedding", log_cfg.m)->check(CLI::PositiveNumber);
  logistic->add_option("--x0", log_cfg.x0);
  logistic->add_option("--burn-in", log_cfg.burn_in);
  logistic->add_option("--measure", log_measures, "measure spec, repeatable or comma separated")->delimiter(',');
  flags.add_to(logistic);
  common.add_to(logistic);

  // bench
  auto* bench = app.add_subcommand("bench", "wall time of each measure on white noise, serial");
  BenchConfig bench_cfg;
  std::vector<std::string> bench_measures;
  bench->add_option("--sizes", bench_cfg.sizes)->delimiter(',');
  bench->add_option("--repeats", bench_cfg.repeats);
  bench->add_option("--measure", bench_measures, "measure spec, repeatable or comma separated")->delimiter(',');
  flags.add_to(bench);
  common.add_to(bench);

  // classify
  auto* classify = app.add_subcommand("classify", "per-class summaries and pairwise Hedges' g");
  ClassificationConfig cls_cfg;
  std::string pipeline = "image", cls_measure = "graden", dataset;
  classify->add_option("--pipeline", pipeline)->check(CLI::IsMember({"image", "signal", "mix"}));
  classify->add_option("--dataset", dataset, "root/<class>/<file> directory (image, signal)");
  classify->add_option("--measure", cls_measure);
  classify->add_option("--target-rows", cls_cfg.target_rows)->check(CLI::PositiveNumber);
  classify->add_option("--target-cols", cls_cfg.target_cols)->check(CLI::PositiveNumber);
  classify->add_option("--signal-mode", cls_cfg.signal_mode)->check(CLI::IsMember({"prefix", "sliding"}));
  classify->add_option("--window", cls_cfg.window)->check(CLI::PositiveNumber);
  classify->add_option("--step", cls_cfg.step)->check(CLI::PositiveNumber);
  classify->add_option("--embedding", cls_cfg.embedding)->check(CLI::PositiveNumber);
  classify->add_option("--mix-p", cls_cfg.mix_p, "MIX p per class (mix)")->delimiter(',');
  classify->add_option("--samples", cls_cfg.samples, "images per class (mix)");
  classify->add_option("--rows", cls_cfg.rows)->check(CLI::PositiveNumber);
  classify->add_option("--cols", cls_cfg.cols)->check(CLI::PositiveNumber);
  flags.add_to(classify);
  common.add_to(classify);

  // rerun
  auto* rerun = app.add_subcommand("rerun", "regenerate an experiment's tables from its manifest");
  std::string manifest_file;
  rerun->add_option("manifest", manifest_file)->required();
  rerun->add_option("--out", common.out, "output path (default: <experiment>.csv)");
  rerun->add_option("--threads", common.threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return 2;
  }

  try {
    if (*compute) return cmd_compute(input, measure, flags, common, signal, embedding);
    if (*simulate) return cmd_simulate(sim, common);
    if (*rerun) return cmd_rerun(manifest_file, common);

    if (*sweep) {
      sweep_cfg.seed = common.resolved_seed();
      sweep_cfg.beta = spectral_exponent(parse_colors({sweep_color}).front());
      for (double a : {sweep_cfg.a_start, sweep_cfg.a_stop})
        for (double b : {sweep_cfg.b_start, sweep_cfg.b_stop}) {
          try {
            quantile_thresholds(a, b);
          } catch (const RangeError& e) {
            throw UsageError(e.what());
          }
        }
      run_and_record("sweep", common, parameters_of(sweep_cfg), [&] { return sweep_thresholds(sweep_cfg).output(); });
    } else if (*noise) {
      noise_cfg.seed = common.resolved_seed();
      noise_cfg.threads = common.threads;
      noise_cfg.colors = parse_colors(noise_colors);
      noise_cfg.measures = flags.apply_all(noise_measures);
      run_and_record("noise-class", common, parameters_of(noise_cfg),
                     [&] { return run_noise_classification(noise_cfg).output(); });
    } else if (*robust) {
      const auto measures = robust_measures.empty() ? std::vector<MeasureSpec>{} : flags.apply_all(robust_measures);
      if (robust_kind == "size") {
        robust_cfg.seed = common.resolved_seed();
        robust_cfg.threads = common.threads;
        robust_cfg.colors = parse_colors(robust_colors);
        robust_cfg.measures = measures;
        if (robust_samples) robust_cfg.samples = *robust_samples;
        run_and_record("robustness", common, parameters_of(robust_cfg),
                       [&] { return run_robustness(robust_cfg).output(); });
      } else {
        mix_cfg.seed = common.resolved_seed();
        mix_cfg.threads = common.threads;
        mix_cfg.measures = measures;
        if (robust_samples) mix_cfg.samples = *robust_samples;
        run_and_record("mix-robustness", common, parameters_of(mix_cfg),
                       [&] { return run_mix_noise_robustness(mix_cfg).output(); });
      }
    } else if (*logistic) {
      log_cfg.threads = common.threads;
      if (!log_measures.empty()) log_cfg.measures = flags.apply_all(log_measures);
      run_and_record("logistic", common, parameters_of(log_cfg), [&] { return run_logistic_sweep(log_cfg).output(); });
    } else if (*bench) {
      bench_cfg.seed = common.resolved_seed();
      if (!bench_measures.empty()) bench_cfg.measures = flags.apply_all(bench_measures);
      run_and_record("bench", common, parameters_of(bench_cfg), [&] { return run_benchmark(bench_cfg).output(); });
    } else if (*classify) {
      cls_cfg.seed = common.resolved_seed();
      cls_cfg.threads = common.threads;
      cls_cfg.pipeline = parse_pipeline(pipeline);
      if (cls_cfg.pipeline != Pipeline::Mix && dataset.empty()) {
        throw UsageError("--dataset is required for the " + pipeline + " pipeline");
      }
      cls_cfg.dataset = dataset;
      cls_cfg.measure = flags.apply(cls_measure);
      run_and_record("classify", common, parameters_of(cls_cfg),
                     [&] { return run_classification(cls_cfg).output(); });
    }
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "graden: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "graden: " << e.what() << "\n";
    return 1;
  }
}
