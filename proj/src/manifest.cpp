#include <graden/manifest.hpp>

#include <chrono>
#include <ctime>
#include <set>

namespace graden {

using nlohmann::json;

namespace {

std::vector<std::string> spec_strings(const std::vector<MeasureSpec>& specs) {
  std::vector<std::string> out;
  for (const auto& s : specs) out.push_back(s.to_string());
  return out;
}

std::vector<std::string> color_strings(const std::vector<NoiseColor>& colors) {
  std::vector<std::string> out;
  for (auto c : colors) out.emplace_back(to_string(c));
  return out;
}

// Reads known keys from a parameter object and remembers which ones were
// consumed so the rest can be reported.
class ParamReader {
 public:
  ParamReader(const json& j, std::vector<std::string>& warnings) : j_(j), warnings_(warnings) {
    if (!j_.is_object()) throw ManifestError("manifest parameters must be a JSON object");
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    seen_.insert(key);
    try {
      out = it->get<T>();
    } catch (const json::exception& e) {
      throw ManifestError("manifest parameter '" + key + "': " + e.what());
    }
  }

  void read_measures(const std::string& key, std::vector<MeasureSpec>& out) {
    std::vector<std::string> texts;
    read(key, texts);
    if (j_.contains(key)) out = parse_measure_specs(texts);
  }

  void read_measure(const std::string& key, MeasureSpec& out) {
    std::string text;
    read(key, text);
    if (j_.contains(key)) out = MeasureSpec::parse(text);
  }

  void read_colors(const std::string& key, std::vector<NoiseColor>& out) {
    std::vector<std::string> texts;
    read(key, texts);
    if (!j_.contains(key)) return;
    out.clear();
    for (const auto& t : texts) out.push_back(parse_noise_color(t));
  }

  ~ParamReader() {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) warnings_.push_back("ignoring unknown parameter '" + key + "'");
    }
  }

 private:
  const json& j_;
  std::vector<std::string>& warnings_;
  std::set<std::string> seen_;
};

SweepConfig sweep_from(const Manifest& m, std::vector<std::string>& w) {
  SweepConfig c;
  c.seed = m.seed;
  ParamReader r(m.parameters, w);
  r.read("rows", c.rows);
  r.read("cols", c.cols);
  r.read("beta", c.beta);
  r.read("a_start", c.a_start);
  r.read("a_stop", c.a_stop);
  r.read("b_start", c.b_start);
  r.read("b_stop", c.b_stop);
  r.read("step", c.step);
  return c;
}

NoiseClassConfig noise_from(const Manifest& m, std::vector<std::string>& w) {
  NoiseClassConfig c;
  c.seed = m.seed;
  ParamReader r(m.parameters, w);
  r.read("samples", c.samples);
  r.read("rows", c.rows);
  r.read("cols", c.cols);
  r.read_colors("colors", c.colors);
  r.read_measures("measures", c.measures);
  return c;
}

RobustnessConfig robustness_from(const Manifest& m, std::vector<std::string>& w) {
  RobustnessConfig c;
  c.seed = m.seed;
  ParamReader r(m.parameters, w);
  r.read("sizes", c.sizes);
  r.read("samples", c.samples);
  r.read_colors("colors", c.colors);
  r.read_measures("measures", c.measures);
  return c;
}

MixRobustnessConfig mix_from(const Manifest& m, std::vector<std::string>& w) {
  MixRobustnessConfig c;
  c.seed = m.seed;
  ParamReader r(m.parameters, w);
  r.read("p_values", c.p_values);
  r.read("variances", c.variances);
  r.read("samples", c.samples);
  r.read("rows", c.rows);
  r.read("cols", c.cols);
  r.read_measures("measures", c.measures);
  return c;
}

LogisticConfig logistic_from(const Manifest& m, std::vector<std::string>& w) {
  LogisticConfig c;
  ParamReader r(m.parameters, w);
  r.read("a_start", c.a_start);
  r.read("a_stop", c.a_stop);
  r.read("step", c.step);
  r.read("n", c.n);
  r.read("m", c.m);
  r.read("x0", c.x0);
  r.read("burn_in", c.burn_in);
  r.read_measures("measures", c.measures);
  return c;
}

BenchConfig bench_from(const Manifest& m, std::vector<std::string>& w) {
  BenchConfig c;
  c.seed = m.seed;
  ParamReader r(m.parameters, w);
  r.read("sizes", c.sizes);
  r.read("repeats", c.repeats);
  r.read_measures("measures", c.measures);
  return c;
}

ClassificationConfig classify_from(const Manifest& m, std::vector<std::string>& w) {
  ClassificationConfig c;
  c.seed = m.seed;
  ParamReader r(m.parameters, w);
  std::string pipeline = std::string(to_string(c.pipeline));
  r.read("pipeline", pipeline);
  c.pipeline = parse_pipeline(pipeline);
  std::string dataset;
  r.read("dataset", dataset);
  c.dataset = dataset;
  r.read_measure("measure", c.measure);
  r.read("target_rows", c.target_rows);
  r.read("target_cols", c.target_cols);
  r.read("signal_mode", c.signal_mode);
  r.read("window", c.window);
  r.read("step", c.step);
  r.read("embedding", c.embedding);
  r.read("mix_p", c.mix_p);
  r.read("samples", c.samples);
  r.read("rows", c.rows);
  r.read("cols", c.cols);
  return c;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"sweep",    "noise-class", "robustness", "mix-robustness",
                                              "logistic", "bench",       "classify"};
  return names;
}

json parameters_of(const SweepConfig& c) {
  return {{"rows", c.rows},       {"cols", c.cols},       {"beta", c.beta},
          {"a_start", c.a_start}, {"a_stop", c.a_stop},   {"b_start", c.b_start},
          {"b_stop", c.b_stop},   {"step", c.step}};
}

json parameters_of(const NoiseClassConfig& c) {
  return {{"samples", c.samples},
          {"rows", c.rows},
          {"cols", c.cols},
          {"colors", color_strings(c.colors)},
          {"measures", spec_strings(c.measures)}};
}

json parameters_of(const RobustnessConfig& c) {
  return {{"sizes", c.sizes},
          {"samples", c.samples},
          {"colors", color_strings(c.colors)},
          {"measures", spec_strings(c.measures.empty() ? default_robustness_measures() : c.measures)}};
}

json parameters_of(const MixRobustnessConfig& c) {
  return {{"p_values", c.p_values},
          {"variances", c.variances},
          {"samples", c.samples},
          {"rows", c.rows},
          {"cols", c.cols},
          {"measures", spec_strings(c.measures.empty() ? default_robustness_measures() : c.measures)}};
}

json parameters_of(const LogisticConfig& c) {
  json j{{"a_start", c.a_start}, {"a_stop", c.a_stop}, {"step", c.step}, {"n", c.n},
         {"m", c.m},             {"x0", c.x0},         {"burn_in", c.burn_in}};
  if (!c.measures.empty()) j["measures"] = spec_strings(c.measures);
  return j;
}

json parameters_of(const BenchConfig& c) {
  return {{"sizes", c.sizes},
          {"repeats", c.repeats},
          {"measures", spec_strings(c.measures.empty() ? default_bench_measures() : c.measures)}};
}

json parameters_of(const ClassificationConfig& c) {
  json j{{"pipeline", std::string(to_string(c.pipeline))}, {"measure", c.measure.to_string()}};
  switch (c.pipeline) {
    case Pipeline::Image:
      j["dataset"] = c.dataset.string();
      j["target_rows"] = c.target_rows;
      j["target_cols"] = c.target_cols;
      break;
    case Pipeline::Signal:
      j["dataset"] = c.dataset.string();
      j["signal_mode"] = c.signal_mode;
      j["window"] = c.window;
      j["step"] = c.step;
      j["embedding"] = c.embedding;
      break;
    case Pipeline::Mix:
      j["mix_p"] = c.mix_p;
      j["samples"] = c.samples;
      j["rows"] = c.rows;
      j["cols"] = c.cols;
      break;
  }
  return j;
}

json to_json(const Manifest& m) {
  return {{"tool", "graden"},           {"version", m.version},     {"experiment", m.experiment},
          {"seed", m.seed},             {"parameters", m.parameters}, {"format", m.format},
          {"created", m.created},
          {"durations", m.durations},   {"outputs", m.outputs}};
}

Manifest parse_manifest(const json& j, std::vector<std::string>& warnings) {
  if (!j.is_object()) throw ManifestError("manifest must be a JSON object");
  static const std::set<std::string> known{"tool",    "version",   "experiment", "seed",
                                           "parameters", "format",  "created",    "durations", "outputs"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) warnings.push_back("ignoring unknown manifest field '" + key + "'");
  }
  if (!j.contains("seed")) throw ManifestError("manifest has no 'seed'");
  if (!j.contains("experiment")) throw ManifestError("manifest has no 'experiment'");
  Manifest m;
  try {
    m.seed = j.at("seed").get<std::uint64_t>();
    m.experiment = j.at("experiment").get<std::string>();
    if (j.contains("parameters")) m.parameters = j.at("parameters");
    if (j.contains("format")) m.format = j.at("format").get<std::string>();
    if (j.contains("version")) m.version = j.at("version").get<std::string>();
    if (j.contains("created")) m.created = j.at("created").get<std::string>();
    if (j.contains("durations")) m.durations = j.at("durations");
    if (j.contains("outputs")) m.outputs = j.at("outputs").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ManifestError(std::string("malformed manifest: ") + e.what());
  }
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), m.experiment) == names.end()) {
    throw ManifestError("unknown experiment '" + m.experiment + "'");
  }
  if (!m.parameters.is_object()) throw ManifestError("manifest parameters must be a JSON object");
  if (m.format != "csv" && m.format != "json") throw ManifestError("unknown output format '" + m.format + "'");
  return m;
}

ExperimentOutput run_manifest(const Manifest& m, std::vector<std::string>& warnings, unsigned threads) {
  if (m.experiment == "sweep") return sweep_thresholds(sweep_from(m, warnings)).output();
  if (m.experiment == "noise-class") {
    auto c = noise_from(m, warnings);
    c.threads = threads;
    return run_noise_classification(c).output();
  }
  if (m.experiment == "robustness") {
    auto c = robustness_from(m, warnings);
    c.threads = threads;
    return run_robustness(c).output();
  }
  if (m.experiment == "mix-robustness") {
    auto c = mix_from(m, warnings);
    c.threads = threads;
    return run_mix_noise_robustness(c).output();
  }
  if (m.experiment == "logistic") {
    auto c = logistic_from(m, warnings);
    c.threads = threads;
    return run_logistic_sweep(c).output();
  }
  if (m.experiment == "bench") return run_benchmark(bench_from(m, warnings)).output();
  if (m.experiment == "classify") {
    auto c = classify_from(m, warnings);
    c.threads = threads;
    return run_classification(c).output();
  }
  throw ManifestError("unknown experiment '" + m.experiment + "'");
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace graden
