#include <graden/experiments.hpp>
#include <graden/transforms.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

namespace graden {

// ------------------------------------------------------------- helpers --

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(sep, start), text.size());
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

double parse_param_double(std::string_view key, std::string_view value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(value), &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw RangeError("bad value for measure parameter '" + std::string(key) + "': '" +
                     std::string(value) + "'");
  }
}

int parse_param_int(std::string_view key, std::string_view value) {
  const double v = parse_param_double(key, value);
  if (v != std::floor(v)) {
    throw RangeError("measure parameter '" + std::string(key) + "' must be an integer");
  }
  return static_cast<int>(v);
}

std::string fmt(double v) { return format_double(v); }

std::vector<std::string> summary_header() {
  return {"n", "mean", "std", "min", "q1", "median", "q3", "max"};
}

void append_summary(std::vector<std::string>& row, const GroupSummary& s) {
  row.push_back(std::to_string(s.n));
  for (double v : {s.mean, s.std, s.min, s.q1, s.median, s.q3, s.max}) row.push_back(fmt(v));
}

std::vector<double> finite_values(const std::vector<double>& values, std::size_t& dropped) {
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) {
    if (std::isfinite(v)) out.push_back(v);
  }
  dropped = values.size() - out.size();
  return out;
}

double cv_or_nan(const std::vector<double>& values) {
  if (values.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double m = mean(values);
  if (m == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return coefficient_of_variation(values);
}

}  // namespace

MeasureSpec MeasureSpec::parse(std::string_view text) {
  MeasureSpec spec;
  const std::size_t colon = text.find(':');
  spec.measure = parse_measure(text.substr(0, colon));
  if (colon == std::string_view::npos) return spec;

  double a = kDefaultQuantileA, b = kDefaultQuantileB;
  double delta = std::numeric_limits<double>::quiet_NaN();
  double gamma = std::numeric_limits<double>::quiet_NaN();
  for (auto item : split(text.substr(colon + 1), ';')) {
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw RangeError("measure parameter needs key=value: '" + std::string(item) + "'");
    }
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    if (spec.measure == Measure::GradEn && key == "a") {
      a = parse_param_double(key, value);
    } else if (spec.measure == Measure::GradEn && key == "b") {
      b = parse_param_double(key, value);
    } else if (spec.measure == Measure::GradEn && key == "delta") {
      delta = parse_param_double(key, value);
    } else if (spec.measure == Measure::GradEn && key == "gamma") {
      gamma = parse_param_double(key, value);
    } else if (spec.measure == Measure::SampEn2D && key == "m") {
      spec.params.sampen.m = parse_param_int(key, value);
    } else if (spec.measure == Measure::SampEn2D && key == "r") {
      spec.params.sampen.r = parse_param_double(key, value);
    } else if (spec.measure == Measure::DistrEn2D && key == "m") {
      spec.params.distren.m = parse_param_int(key, value);
    } else if (spec.measure == Measure::DistrEn2D && (key == "bins" || key == "M")) {
      spec.params.distren.bins = parse_param_int(key, value);
    } else if (spec.measure == Measure::PerEn2D && key == "block") {
      if (value != "2x2") throw RangeError("peren2d supports only block=2x2");
    } else {
      throw RangeError("unknown parameter '" + std::string(key) + "' for measure " +
                       std::string(graden::to_string(spec.measure)));
    }
  }
  if (spec.measure == Measure::GradEn) {
    if (std::isnan(delta) != std::isnan(gamma)) {
      throw RangeError("graden: delta and gamma must be given together");
    }
    spec.params.thresholds = std::isnan(delta) ? quantile_thresholds(a, b) : raw_thresholds(delta, gamma);
  }
  return spec;
}

std::string MeasureSpec::to_string() const {
  return std::string(graden::to_string(measure)) + ":" + describe_params(measure, params);
}

std::vector<MeasureSpec> parse_measure_specs(const std::vector<std::string>& texts) {
  std::vector<MeasureSpec> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(MeasureSpec::parse(t));
  return out;
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> decimal_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw RangeError("grid step must be > 0");
  if (stop < start) throw RangeError("grid stop is below start");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k) {
    grid[k] = std::round((start + static_cast<double>(k) * step) * 1e9) / 1e9;
  }
  return grid;
}

// ---------------------------------------------------------------- sweep --

std::size_t SweepResult::rank(Eigen::Index i, Eigen::Index j) const {
  return static_cast<std::size_t>((values.array() > values(i, j)).count());
}

ExperimentOutput SweepResult::output() const {
  CsvTable t{{"experiment", "measure", "a", "b", "delta", "gamma", "value"}, {}};
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      t.rows.push_back({"sweep", "graden", fmt(a[i]), fmt(b[j]), fmt(normal_quantile(a[i])),
                        fmt(normal_quantile(b[j])),
                        fmt(values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))});
    }
  }
  return {{{"observations", std::move(t)}}};
}

SweepResult sweep_thresholds(const SweepConfig& config) {
  SweepResult result;
  result.a = decimal_grid(config.a_start, config.a_stop, config.step);
  result.b = decimal_grid(config.b_start, config.b_stop, config.step);
  for (double a : result.a) quantile_thresholds(a, result.b.front());  // validate a range
  for (double b : result.b) quantile_thresholds(result.a.front(), b);  // validate b range

  const GrayImage image = noise_image({config.beta, config.rows, config.cols, config.seed});
  const auto field = standardize(compute_gradients(image));
  result.values.resize(static_cast<Eigen::Index>(result.a.size()),
                       static_cast<Eigen::Index>(result.b.size()));
  for (std::size_t i = 0; i < result.a.size(); ++i) {
    for (std::size_t j = 0; j < result.b.size(); ++j) {
      result.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          pattern_histogram(field, quantile_thresholds(result.a[i], result.b[j])).entropy();
    }
  }
  return result;
}

// ------------------------------------------------------ noise classes --

const GroupValues& NoiseClassResult::find(std::string_view group, std::string_view measure) const {
  for (const auto& g : groups) {
    if (g.group == group && g.measure == measure) return g;
  }
  throw RangeError("no group " + std::string(group) + "/" + std::string(measure));
}

ExperimentOutput NoiseClassResult::output() const {
  CsvTable obs{{"experiment", "measure", "noise", "sample", "value"}, {}};
  auto header = std::vector<std::string>{"experiment", "measure", "noise"};
  for (auto& h : summary_header()) header.push_back(h);
  CsvTable sum{header, {}};
  for (const auto& g : groups) {
    for (std::size_t k = 0; k < g.values.size(); ++k) {
      obs.rows.push_back({"noise-class", g.measure, g.group, std::to_string(k), fmt(g.values[k])});
    }
    std::vector<std::string> row{"noise-class", g.measure, g.group};
    append_summary(row, g.summary);
    sum.rows.push_back(std::move(row));
  }
  return {{{"observations", std::move(obs)}, {"summary", std::move(sum)}}};
}

NoiseClassResult run_noise_classification(const NoiseClassConfig& config) {
  if (config.samples < 2) throw RangeError("noise classification needs at least 2 samples");
  if (config.measures.empty()) throw RangeError("no measures requested");
  const std::size_t nm = config.measures.size();
  const std::size_t per_color = config.samples;
  std::vector<double> values(config.colors.size() * per_color * nm);

  parallel_for(config.colors.size() * per_color, config.threads, [&](std::size_t job) {
    const std::size_t c = job / per_color;
    const std::size_t k = job % per_color;
    const GrayImage image = noise_image({spectral_exponent(config.colors[c]), config.rows,
                                         config.cols, derive_seed(config.seed, {c, k})});
    for (std::size_t m = 0; m < nm; ++m) values[(c * nm + m) * per_color + k] = config.measures[m](image);
  });

  NoiseClassResult result;
  for (std::size_t c = 0; c < config.colors.size(); ++c) {
    for (std::size_t m = 0; m < nm; ++m) {
      GroupValues g;
      g.group = std::string(to_string(config.colors[c]));
      g.measure = config.measures[m].to_string();
      const auto first = values.begin() + static_cast<std::ptrdiff_t>((c * nm + m) * per_color);
      g.values.assign(first, first + static_cast<std::ptrdiff_t>(per_color));
      g.summary = group_summary(g.values);
      result.groups.push_back(std::move(g));
    }
  }
  return result;
}

// ----------------------------------------------------------- robustness --

double CvResult::cv(std::string_view group, double level, std::string_view measure) const {
  for (const auto& e : entries) {
    if (e.group == group && e.level == level && e.measure == measure) return e.cv;
  }
  throw RangeError("no CV entry for " + std::string(group) + "/" + fmt(level) + "/" +
                   std::string(measure));
}

double CvResult::mean_cv(std::string_view group, std::string_view measure) const {
  double total = 0.0;
  std::size_t n = 0;
  for (const auto& e : entries) {
    if (e.group == group && e.measure == measure) {
      total += e.cv;
      ++n;
    }
  }
  if (n == 0) throw RangeError("no CV entries for " + std::string(group) + "/" + std::string(measure));
  return total / static_cast<double>(n);
}

ExperimentOutput CvResult::output() const {
  CsvTable obs{{"experiment", "measure", group_name, level_name, "sample", "value"}, {}};
  CsvTable sum{{"experiment", "measure", group_name, level_name, "n", "undefined", "mean", "std", "cv"}, {}};
  CsvTable by_group{{"experiment", "measure", group_name, "levels", "mean_cv"}, {}};
  std::vector<std::pair<std::string, std::string>> seen;
  for (const auto& e : entries) {
    for (std::size_t k = 0; k < e.values.size(); ++k) {
      obs.rows.push_back({experiment, e.measure, e.group, fmt(e.level), std::to_string(k), fmt(e.values[k])});
    }
    std::size_t dropped = 0;
    const auto finite = finite_values(e.values, dropped);
    const double m = finite.empty() ? std::numeric_limits<double>::quiet_NaN() : mean(finite);
    const double s = finite.empty() ? std::numeric_limits<double>::quiet_NaN() : population_std(finite);
    sum.rows.push_back({experiment, e.measure, e.group, fmt(e.level), std::to_string(finite.size()),
                        std::to_string(dropped), fmt(m), fmt(s), fmt(e.cv)});
    if (std::find(seen.begin(), seen.end(), std::pair{e.measure, e.group}) == seen.end()) {
      seen.emplace_back(e.measure, e.group);
    }
  }
  for (const auto& [measure, group] : seen) {
    std::size_t levels = 0;
    for (const auto& e : entries) levels += e.group == group && e.measure == measure;
    by_group.rows.push_back({experiment, measure, group, std::to_string(levels), fmt(mean_cv(group, measure))});
  }
  return {{{"observations", std::move(obs)}, {"cv", std::move(sum)}, {"cv_by_" + group_name, std::move(by_group)}}};
}

std::vector<MeasureSpec> default_robustness_measures() {
  return {MeasureSpec::parse("graden"), MeasureSpec::parse("sampen2d:m=1;r=0.2"),
          MeasureSpec::parse("distren2d:m=2;bins=128")};
}

namespace {

// Evaluates every measure on `count` images per group and reduces each
// (group, measure) to a CV over its finite values.
template <typename MakeImage>
void fill_cv_entries(CvResult& result, const std::vector<std::pair<std::string, double>>& groups,
                     std::size_t count, const std::vector<MeasureSpec>& measures, unsigned threads,
                     MakeImage make_image) {
  const std::size_t nm = measures.size();
  std::vector<double> values(groups.size() * nm * count);
  parallel_for(groups.size() * count, threads, [&](std::size_t job) {
    const std::size_t g = job / count;
    const std::size_t k = job % count;
    const GrayImage image = make_image(g, k);
    for (std::size_t m = 0; m < nm; ++m) values[(g * nm + m) * count + k] = measures[m](image);
  });
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t m = 0; m < nm; ++m) {
      CvEntry e;
      e.group = groups[g].first;
      e.level = groups[g].second;
      e.measure = measures[m].to_string();
      const auto first = values.begin() + static_cast<std::ptrdiff_t>((g * nm + m) * count);
      e.values.assign(first, first + static_cast<std::ptrdiff_t>(count));
      e.cv = cv_or_nan(finite_values(e.values, e.undefined));
      result.entries.push_back(std::move(e));
    }
  }
}

}  // namespace

CvResult run_robustness(const RobustnessConfig& config) {
  if (config.samples < 2) throw RangeError("robustness needs at least 2 samples");
  const auto measures = config.measures.empty() ? default_robustness_measures() : config.measures;
  CvResult result{"robustness", "noise", "size", {}};
  std::vector<std::pair<std::string, double>> groups;
  std::vector<std::pair<NoiseColor, Eigen::Index>> shapes;
  for (std::size_t c = 0; c < config.colors.size(); ++c) {
    for (auto size : config.sizes) {
      groups.emplace_back(std::string(to_string(config.colors[c])), static_cast<double>(size));
      shapes.emplace_back(config.colors[c], size);
    }
  }
  fill_cv_entries(result, groups, config.samples, measures, config.threads,
                  [&](std::size_t g, std::size_t k) {
                    const auto [color, size] = shapes[g];
                    return noise_image({spectral_exponent(color), size, size,
                                        derive_seed(config.seed, {g, k})});
                  });
  return result;
}

CvResult run_mix_noise_robustness(const MixRobustnessConfig& config) {
  if (config.samples < 2) throw RangeError("mix robustness needs at least 2 samples per variance");
  if (config.variances.empty()) throw RangeError("mix robustness needs at least one variance");
  const auto measures = config.measures.empty() ? default_robustness_measures() : config.measures;
  CvResult result{"mix-robustness", "p", "variance", {}};
  std::vector<GrayImage> bases;
  std::vector<std::pair<std::string, double>> groups;
  std::vector<std::pair<std::size_t, std::size_t>> index;  // (p, variance) per group
  for (std::size_t g = 0; g < config.p_values.size(); ++g) {
    bases.push_back(mix2d({config.p_values[g], config.rows, config.cols, derive_seed(config.seed, {g})}));
    for (std::size_t v = 0; v < config.variances.size(); ++v) {
      groups.emplace_back(fmt(config.p_values[g]), config.variances[v]);
      index.emplace_back(g, v);
    }
  }
  fill_cv_entries(result, groups, config.samples, measures, config.threads,
                  [&](std::size_t group, std::size_t k) {
                    const auto [g, v] = index[group];
                    return GrayImage(bases[g] + gaussian_image(config.rows, config.cols,
                                                               config.variances[v],
                                                               derive_seed(config.seed, {g, v, k})));
                  });
  return result;
}

// ------------------------------------------------------------- logistic --

Eigen::VectorXd LogisticResult::column(std::string_view measure) const {
  for (std::size_t m = 0; m < measures.size(); ++m) {
    if (measures[m] == measure || measures[m].starts_with(std::string(measure) + ":")) {
      return values.col(static_cast<Eigen::Index>(m));
    }
  }
  throw RangeError("no logistic column for " + std::string(measure));
}

double LogisticResult::at(double a_value, std::string_view measure) const {
  const Eigen::VectorXd col = column(measure);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - a_value) < 1e-9) return col[static_cast<Eigen::Index>(i)];
  }
  throw RangeError("a=" + fmt(a_value) + " is not on the sweep grid");
}

ExperimentOutput LogisticResult::output() const {
  CsvTable obs{{"experiment", "measure", "a", "value"}, {}};
  CsvTable sum{{"experiment", "measure", "spearman_a"}, {}};
  for (std::size_t m = 0; m < measures.size(); ++m) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      obs.rows.push_back({"logistic", measures[m], fmt(a[i]),
                          fmt(values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)))});
    }
    const Eigen::VectorXd col = values.col(static_cast<Eigen::Index>(m));
    double rho = std::numeric_limits<double>::quiet_NaN();
    if (a.size() >= 2 && col.allFinite() && (col.array() != col[0]).any()) {
      rho = spearman(a, std::span<const double>(col.data(), static_cast<std::size_t>(col.size())));
    }
    sum.rows.push_back({"logistic", measures[m], fmt(rho)});
  }
  return {{{"observations", std::move(obs)}, {"summary", std::move(sum)}}};
}

LogisticResult run_logistic_sweep(const LogisticConfig& config) {
  const auto measures = config.measures.empty()
                            ? std::vector<MeasureSpec>{MeasureSpec::parse("peren2d"),
                                                       MeasureSpec::parse("distren2d:m=2;bins=128"),
                                                       MeasureSpec::parse("graden")}
                            : config.measures;
  LogisticResult result;
  result.a = decimal_grid(config.a_start, config.a_stop, config.step);
  for (const auto& m : measures) result.measures.push_back(m.to_string());
  result.values.resize(static_cast<Eigen::Index>(result.a.size()),
                       static_cast<Eigen::Index>(measures.size()));
  parallel_for(result.a.size(), config.threads, [&](std::size_t i) {
    const TimeSeries series = logistic_series({result.a[i], config.x0, config.n, config.burn_in});
    const GrayImage d = distance_matrix(series, config.m);
    for (std::size_t m = 0; m < measures.size(); ++m) {
      result.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) = measures[m](d);
    }
  });
  return result;
}

// ------------------------------------------------------------ benchmark --

std::vector<MeasureSpec> default_bench_measures() {
  return parse_measure_specs({"sampen2d:m=1", "sampen2d:m=2", "sampen2d:m=3", "distren2d:m=1",
                              "distren2d:m=2", "distren2d:m=3", "graden"});
}

double BenchResult::median_seconds(std::string_view measure, Eigen::Index size) const {
  for (std::size_t m = 0; m < measures.size(); ++m) {
    if (measures[m] != measure) continue;
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      if (sizes[s] == size) return quantile(seconds[m][s], 0.5);
    }
  }
  throw RangeError("no benchmark entry for " + std::string(measure) + " at " + std::to_string(size));
}

ExperimentOutput BenchResult::output() const {
  CsvTable obs{{"experiment", "measure", "size", "repeat", "seconds"}, {}};
  std::vector<std::string> header{"measure"};
  for (auto s : sizes) header.push_back(std::to_string(s) + "x" + std::to_string(s));
  CsvTable table{header, {}};
  for (std::size_t m = 0; m < measures.size(); ++m) {
    std::vector<std::string> row{measures[m]};
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      for (std::size_t r = 0; r < seconds[m][s].size(); ++r) {
        obs.rows.push_back({"bench", measures[m], std::to_string(sizes[s]), std::to_string(r),
                            fmt(seconds[m][s][r])});
      }
      row.push_back(fmt(quantile(seconds[m][s], 0.5)));
    }
    table.rows.push_back(std::move(row));
  }
  return {{{"observations", std::move(obs)}, {"table", std::move(table)}}};
}

BenchResult run_benchmark(const BenchConfig& config) {
  if (config.repeats < 1) throw RangeError("benchmark needs at least 1 repeat");
  const auto measures = config.measures.empty() ? default_bench_measures() : config.measures;
  BenchResult result;
  result.sizes = config.sizes;
  for (const auto& m : measures) result.measures.push_back(m.to_string());
  result.seconds.assign(measures.size(),
                        std::vector<std::vector<double>>(config.sizes.size(), std::vector<double>{}));
  for (std::size_t s = 0; s < config.sizes.size(); ++s) {
    const auto size = config.sizes[s];
    const GrayImage image = noise_image({0.0, size, size, derive_seed(config.seed, {s})});
    for (std::size_t m = 0; m < measures.size(); ++m) {
      for (std::size_t r = 0; r < config.repeats; ++r) {
        const auto start = std::chrono::steady_clock::now();
        volatile double sink = measures[m](image);
        (void)sink;
        const auto stop = std::chrono::steady_clock::now();
        result.seconds[m][s].push_back(std::chrono::duration<double>(stop - start).count());
      }
    }
  }
  return result;
}

// -------------------------------------------------------- classification --

std::string_view to_string(Pipeline p) {
  switch (p) {
    case Pipeline::Image: return "image";
    case Pipeline::Signal: return "signal";
    case Pipeline::Mix: return "mix";
  }
  return "image";
}

Pipeline parse_pipeline(std::string_view name) {
  if (name == "image") return Pipeline::Image;
  if (name == "signal") return Pipeline::Signal;
  if (name == "mix") return Pipeline::Mix;
  throw RangeError("unknown pipeline '" + std::string(name) + "' (expected image, signal or mix)");
}

ExperimentOutput ClassificationResult::output() const {
  CsvTable obs{{"experiment", "measure", "label", "source", "value"}, {}};
  for (std::size_t i = 0; i < values.size(); ++i) {
    obs.rows.push_back({"classify", measure, labels[i], sources[i], fmt(values[i])});
  }
  auto header = std::vector<std::string>{"experiment", "measure", "label"};
  for (auto& h : summary_header()) header.push_back(h);
  CsvTable sum{header, {}};
  for (const auto& [label, s] : summaries) {
    std::vector<std::string> row{"classify", measure, label};
    append_summary(row, s);
    sum.rows.push_back(std::move(row));
  }
  CsvTable eff{{"experiment", "measure", "first", "second", "n1", "n2", "hedges_g"}, {}};
  for (const auto& e : effects) {
    eff.rows.push_back({"classify", measure, e.first, e.second, std::to_string(e.effect.n1),
                        std::to_string(e.effect.n2), fmt(e.effect.g)});
  }
  CsvTable fail{{"source", "error"}, {}};
  for (const auto& f : failures) fail.rows.push_back({f.source.string(), f.message});
  ExperimentOutput out{{{"observations", std::move(obs)}, {"summary", std::move(sum)},
                        {"effects", std::move(eff)}}};
  if (!failures.empty()) out.tables.push_back({"failures", std::move(fail)});
  return out;
}

ClassificationResult classify_samples(const std::vector<LabeledSample>& samples,
                                      const MeasureSpec& measure, unsigned threads) {
  ClassificationResult result;
  result.measure = measure.to_string();
  result.values.resize(samples.size());
  parallel_for(samples.size(), threads,
               [&](std::size_t i) { result.values[i] = measure(samples[i].image); });

  for (const auto& s : samples) {
    result.labels.push_back(s.label);
    result.sources.push_back(s.source.string());
    if (std::find(result.labels.begin(), result.labels.end() - 1, s.label) == result.labels.end() - 1) {
      result.summaries.emplace_back(s.label, GroupSummary{});
    }
  }
  std::vector<std::vector<double>> per_class(result.summaries.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t c = 0; c < result.summaries.size(); ++c) {
      if (result.summaries[c].first == result.labels[i] && std::isfinite(result.values[i])) {
        per_class[c].push_back(result.values[i]);
      }
    }
  }
  for (std::size_t c = 0; c < per_class.size(); ++c) {
    if (!per_class[c].empty()) result.summaries[c].second = group_summary(per_class[c]);
  }
  for (std::size_t c1 = 0; c1 < per_class.size(); ++c1) {
    for (std::size_t c2 = c1 + 1; c2 < per_class.size(); ++c2) {
      EffectSize e{std::numeric_limits<double>::quiet_NaN(), per_class[c1].size(), per_class[c2].size()};
      try {
        e = hedges_g(per_class[c1], per_class[c2]);
      } catch (const Error&) {
        // too few samples or zero pooled variance: reported as NaN
      }
      result.effects.push_back({result.summaries[c1].first, result.summaries[c2].first, e});
    }
  }
  return result;
}

ClassificationResult run_classification(const ClassificationConfig& config) {
  std::vector<LabeledSample> samples;
  std::vector<LoadFailure> failures;
  switch (config.pipeline) {
    case Pipeline::Image: {
      auto loaded = load_dataset(config.dataset);
      failures = std::move(loaded.failures);
      for (auto& s : loaded.samples) {
        try {
          s.image = downsample(s.image, config.target_rows, config.target_cols);
          samples.push_back(std::move(s));
        } catch (const Error& e) {
          failures.push_back({s.source, e.what()});
        }
      }
      break;
    }
    case Pipeline::Signal: {
      if (config.signal_mode != "prefix" && config.signal_mode != "sliding") {
        throw RangeError("signal mode must be prefix or sliding");
      }
      auto loaded = load_signal_dataset(config.dataset);
      failures = std::move(loaded.failures);
      for (const auto& s : loaded.samples) {
        try {
          if (config.signal_mode == "prefix") {
            samples.push_back({s.label, s.source, distance_matrix(prefix(s.signal, config.window), config.embedding)});
          } else {
            const auto windows = sliding_windows(s.signal, config.window, config.step);
            for (std::size_t w = 0; w < windows.size(); ++w) {
              auto source = s.source;
              source += "#" + std::to_string(w);
              samples.push_back({s.label, source, distance_matrix(windows[w], config.embedding)});
            }
          }
        } catch (const Error& e) {
          failures.push_back({s.source, e.what()});
        }
      }
      break;
    }
    case Pipeline::Mix: {
      if (config.samples < 1) throw RangeError("mix pipeline needs at least 1 sample per class");
      for (std::size_t c = 0; c < config.mix_p.size(); ++c) {
        const std::string label = "mix_p=" + fmt(config.mix_p[c]);
        for (std::size_t k = 0; k < config.samples; ++k) {
          samples.push_back({label, label + "#" + std::to_string(k),
                             mix2d({config.mix_p[c], config.rows, config.cols,
                                    derive_seed(config.seed, {c, k})})});
        }
      }
      break;
    }
  }
  if (samples.empty()) throw EmptyDatasetError("classification: no usable samples");
  auto result = classify_samples(samples, config.measure, config.threads);
  result.failures = std::move(failures);
  return result;
}

}  // namespace graden
