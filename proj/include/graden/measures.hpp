#pragma once

// Uniform dispatch over the entropy measures, used by the experiment
// drivers and the CLI.

#include <graden/baselines.hpp>
#include <graden/gradient_entropy.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace graden {

enum class Measure { GradEn, SampEn2D, DistrEn2D, PerEn2D };

std::string_view to_string(Measure m);
Measure parse_measure(std::string_view name);
std::vector<Measure> parse_measure_list(std::string_view comma_separated);

struct MeasureParams {
  Thresholds thresholds = default_thresholds();
  SampEn2DParams sampen{};
  DistrEn2DParams distren{};
};

// NaN when the measure is undefined for the image (sample entropy with no
// matches).
double evaluate(Measure m, const GrayImage& image, const MeasureParams& params = {});

// Short parameter tag, e.g. "m=1;r=0.2" or "a=0.55;b=0.8".
std::string describe_params(Measure m, const MeasureParams& params);

}  // namespace graden
