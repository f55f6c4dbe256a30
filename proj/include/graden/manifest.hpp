#pragma once

// Run manifests: a JSON record of an experiment's name, seed and full
// parameter set, sufficient to regenerate its result tables exactly.
//
//   {
//     "tool": "graden", "version": "0.1.0",
//     "experiment": "noise-class", "seed": 42,
//     "parameters": { "samples": 50, "rows": 100, ... },
//     "format": "csv",
//     "created": "2026-10-16T12:00:00Z",
//     "durations": { "total_seconds": 1.25 },
//     "outputs": ["noise.csv", "noise.summary.csv"]
//   }
//
// Unknown fields are accepted and reported as warnings; a missing seed or
// experiment name is a validation error.

#include <graden/experiments.hpp>

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace graden {

class ManifestError : public Error {
 public:
  using Error::Error;
};

struct Manifest {
  std::string experiment;
  std::uint64_t seed = 0;
  nlohmann::json parameters = nlohmann::json::object();
  std::string format = "csv";
  std::string version = GRADEN_VERSION;
  std::string created;
  nlohmann::json durations = nlohmann::json::object();
  std::vector<std::string> outputs;
};

nlohmann::json to_json(const Manifest& m);

// Validates and parses; unknown top-level and parameter keys are appended
// to `warnings`.
Manifest parse_manifest(const nlohmann::json& j, std::vector<std::string>& warnings);

// Names accepted in Manifest::experiment.
const std::vector<std::string>& experiment_names();

// Parameter blocks for each experiment config (seed excluded; it lives at
// the top level of the manifest).
nlohmann::json parameters_of(const SweepConfig& c);
nlohmann::json parameters_of(const NoiseClassConfig& c);
nlohmann::json parameters_of(const RobustnessConfig& c);
nlohmann::json parameters_of(const MixRobustnessConfig& c);
nlohmann::json parameters_of(const LogisticConfig& c);
nlohmann::json parameters_of(const BenchConfig& c);
nlohmann::json parameters_of(const ClassificationConfig& c);

// Rebuilds the experiment config from the manifest and runs it. Worker
// thread count does not affect results and is taken from `threads`.
ExperimentOutput run_manifest(const Manifest& m, std::vector<std::string>& warnings,
                              unsigned threads = 0);

std::string utc_timestamp();

}  // namespace graden
