#include <graden/io.hpp>
#include <graden/measures.hpp>

#include <algorithm>
#include <cctype>
#include <limits>

namespace graden {

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::GradEn: return "graden";
    case Measure::SampEn2D: return "sampen2d";
    case Measure::DistrEn2D: return "distren2d";
    case Measure::PerEn2D: return "peren2d";
  }
  return "graden";
}

Measure parse_measure(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "graden") return Measure::GradEn;
  if (lower == "sampen2d" || lower == "sampen") return Measure::SampEn2D;
  if (lower == "distren2d" || lower == "distren") return Measure::DistrEn2D;
  if (lower == "peren2d" || lower == "peren") return Measure::PerEn2D;
  throw RangeError("unknown measure '" + std::string(name) + "'");
}

std::vector<Measure> parse_measure_list(std::string_view comma_separated) {
  std::vector<Measure> out;
  std::size_t start = 0;
  while (start <= comma_separated.size()) {
    const std::size_t end = std::min(comma_separated.find(',', start), comma_separated.size());
    const auto token = comma_separated.substr(start, end - start);
    if (!token.empty()) out.push_back(parse_measure(token));
    start = end + 1;
  }
  if (out.empty()) throw RangeError("empty measure list");
  return out;
}

double evaluate(Measure m, const GrayImage& image, const MeasureParams& params) {
  switch (m) {
    case Measure::GradEn: return graden(image, params.thresholds);
    case Measure::SampEn2D:
      return sampen2d(image, params.sampen).value_or(std::numeric_limits<double>::quiet_NaN());
    case Measure::DistrEn2D: return distren2d(image, params.distren);
    case Measure::PerEn2D: return peren2d(image);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::string describe_params(Measure m, const MeasureParams& params) {
  switch (m) {
    case Measure::GradEn: {
      const auto& t = params.thresholds;
      if (t.from_quantiles()) return "a=" + format_double(t.quantile_a) + ";b=" + format_double(t.quantile_b);
      return "delta=" + format_double(t.delta) + ";gamma=" + format_double(t.gamma);
    }
    case Measure::SampEn2D:
      return "m=" + std::to_string(params.sampen.m) + ";r=" + format_double(params.sampen.r);
    case Measure::DistrEn2D:
      return "m=" + std::to_string(params.distren.m) + ";bins=" + std::to_string(params.distren.bins);
    case Measure::PerEn2D: return "block=2x2";
  }
  return {};
}

}  // namespace graden
