#pragma once

// Scripted experiments over simulated and user-supplied data. Each driver
// takes a plain config struct, is fully determined by it (timings aside),
// and returns its results as typed data plus CSV tables.
//
// Per-sample randomness: sample k of group g draws from
// derive_seed(config.seed, {g, k}), so output never depends on the number
// of worker threads or their scheduling.

#include <graden/generators.hpp>
#include <graden/io.hpp>
#include <graden/measures.hpp>
#include <graden/stats.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace graden {

// A measure plus its parameters, written "name" or "name:key=value;...",
// e.g. "sampen2d:m=1;r=0.2", "graden:a=0.55;b=0.8", "distren2d:bins=64".
struct MeasureSpec {
  Measure measure = Measure::GradEn;
  MeasureParams params{};

  static MeasureSpec parse(std::string_view text);
  std::string to_string() const;
  double operator()(const GrayImage& image) const { return evaluate(measure, image, params); }
};

std::vector<MeasureSpec> parse_measure_specs(const std::vector<std::string>& texts);

struct NamedTable {
  std::string name;
  CsvTable table;
};

// The first table holds one row per observation; further tables hold
// derived summaries.
struct ExperimentOutput {
  std::vector<NamedTable> tables;
};

// Runs fn(0..count-1) on up to `threads` workers (0 = hardware threads).
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

// Inclusive arithmetic grid start, start + step, ..., stop, with values
// rounded to 1e-9 so that decimal steps print cleanly.
std::vector<double> decimal_grid(double start, double stop, double step);

// ---------------------------------------------------------------- sweep --

struct SweepConfig {
  Eigen::Index rows = 100;
  Eigen::Index cols = 100;
  double beta = 0.0;
  double a_start = 0.51, a_stop = 0.74;
  double b_start = 0.76, b_stop = 0.95;
  double step = 0.01;
  std::uint64_t seed = 0;
};

struct SweepResult {
  std::vector<double> a;
  std::vector<double> b;
  Eigen::MatrixXd values;  // rows follow a, columns follow b

  // Number of grid values strictly greater than values(i, j).
  std::size_t rank(Eigen::Index i, Eigen::Index j) const;
  ExperimentOutput output() const;
};

SweepResult sweep_thresholds(const SweepConfig& config);

// ------------------------------------------------------ noise classes --

struct NoiseClassConfig {
  std::size_t samples = 50;
  Eigen::Index rows = 100;
  Eigen::Index cols = 100;
  std::vector<NoiseColor> colors{NoiseColor::White, NoiseColor::Pink, NoiseColor::Blue,
                                 NoiseColor::Red};
  std::vector<MeasureSpec> measures{MeasureSpec{}};
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

struct GroupValues {
  std::string group;
  std::string measure;
  std::vector<double> values;
  GroupSummary summary;
};

struct NoiseClassResult {
  std::vector<GroupValues> groups;  // color-major, then measure

  const GroupValues& find(std::string_view group, std::string_view measure) const;
  ExperimentOutput output() const;
};

NoiseClassResult run_noise_classification(const NoiseClassConfig& config);

// ----------------------------------------------------------- robustness --

struct RobustnessConfig {
  std::vector<Eigen::Index> sizes{20, 30, 40, 50, 60, 70, 80, 90, 100, 110, 120, 130, 140, 150};
  std::size_t samples = 100;
  std::vector<NoiseColor> colors{NoiseColor::White, NoiseColor::Pink};
  std::vector<MeasureSpec> measures;  // empty: graden, sampen2d, distren2d
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

struct CvEntry {
  std::string group;   // noise color, or MIX p
  double level = 0.0;  // image side, or added noise variance
  std::string measure;
  std::vector<double> values;
  std::size_t undefined = 0;  // NaN values dropped before the CV
  double cv = 0.0;
};

struct CvResult {
  std::string experiment;
  std::string group_name;
  std::string level_name;
  std::vector<CvEntry> entries;

  double cv(std::string_view group, double level, std::string_view measure) const;
  // Mean of the per-level CVs of one group.
  double mean_cv(std::string_view group, std::string_view measure) const;
  ExperimentOutput output() const;
};

std::vector<MeasureSpec> default_robustness_measures();

CvResult run_robustness(const RobustnessConfig& config);

// Noise robustness on the MIX process. For each p one MIX realization is
// drawn; every CV group is that image plus `samples` independent white
// Gaussian noise fields of one variance. The per-p figure is the mean of its
// per-variance CVs, so a measure's systematic response to the noise level is
// not counted as instability.
struct MixRobustnessConfig {
  std::vector<double> p_values{0.2, 0.5, 0.8};
  std::vector<double> variances{0.01, 0.02, 0.03, 0.04, 0.05};
  std::size_t samples = 30;
  Eigen::Index rows = 100;
  Eigen::Index cols = 100;
  std::vector<MeasureSpec> measures;  // empty: graden, sampen2d, distren2d
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

CvResult run_mix_noise_robustness(const MixRobustnessConfig& config);

// ------------------------------------------------------------- logistic --

struct LogisticConfig {
  double a_start = 3.5, a_stop = 4.0, step = 0.01;
  Eigen::Index n = 150;
  Eigen::Index m = 3;
  double x0 = 0.3;
  Eigen::Index burn_in = 0;
  std::vector<MeasureSpec> measures;  // empty: peren2d, distren2d, graden
  unsigned threads = 0;
};

struct LogisticResult {
  std::vector<double> a;
  std::vector<std::string> measures;
  Eigen::MatrixXd values;  // rows follow a, columns follow measures

  Eigen::VectorXd column(std::string_view measure) const;
  double at(double a_value, std::string_view measure) const;
  ExperimentOutput output() const;
};

LogisticResult run_logistic_sweep(const LogisticConfig& config);

// ------------------------------------------------------------ benchmark --

struct BenchConfig {
  std::vector<Eigen::Index> sizes{40, 80, 120, 160};
  std::vector<MeasureSpec> measures;  // empty: Table-1 set
  std::size_t repeats = 3;
  std::uint64_t seed = 0;
};

struct BenchResult {
  std::vector<Eigen::Index> sizes;
  std::vector<std::string> measures;
  std::vector<std::vector<std::vector<double>>> seconds;  // [measure][size][repeat]

  double median_seconds(std::string_view measure, Eigen::Index size) const;
  ExperimentOutput output() const;
};

std::vector<MeasureSpec> default_bench_measures();

// Timed serially on white-noise images, one image per size.
BenchResult run_benchmark(const BenchConfig& config);

// -------------------------------------------------------- classification --

enum class Pipeline { Image, Signal, Mix };

std::string_view to_string(Pipeline p);
Pipeline parse_pipeline(std::string_view name);

struct ClassificationConfig {
  Pipeline pipeline = Pipeline::Image;
  std::filesystem::path dataset;
  MeasureSpec measure{};
  // image pipeline
  Eigen::Index target_rows = 128;
  Eigen::Index target_cols = 128;
  // signal pipeline: "prefix" uses the first `window` points of each file,
  // "sliding" every window of `window` points advancing by `step`.
  std::string signal_mode = "prefix";
  Eigen::Index window = 150;
  Eigen::Index step = 10;
  Eigen::Index embedding = 3;
  // synthetic MIX stand-in
  std::vector<double> mix_p{0.2, 0.8};
  std::size_t samples = 50;
  Eigen::Index rows = 100;
  Eigen::Index cols = 100;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

struct PairwiseEffect {
  std::string first;
  std::string second;
  EffectSize effect;
};

struct ClassificationResult {
  std::string measure;
  std::vector<std::string> labels;
  std::vector<std::string> sources;
  std::vector<double> values;
  std::vector<std::pair<std::string, GroupSummary>> summaries;
  std::vector<PairwiseEffect> effects;
  std::vector<LoadFailure> failures;

  ExperimentOutput output() const;
};

// Applies the measure to already prepared labeled images.
ClassificationResult classify_samples(const std::vector<LabeledSample>& samples,
                                      const MeasureSpec& measure, unsigned threads = 0);

ClassificationResult run_classification(const ClassificationConfig& config);

}  // namespace graden
