#include <graden/stats.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace graden {

namespace {

void require_count(std::span<const double> values, std::size_t n, const char* what) {
  if (values.size() < n) {
    throw DimensionError(std::string(what) + ": need at least " + std::to_string(n) +
                         " values, got " + std::to_string(values.size()));
  }
}

}  // namespace

double mean(std::span<const double> values) {
  require_count(values, 1, "mean");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double population_std(std::span<const double> values) {
  require_count(values, 1, "population_std");
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); })) {
    return 0.0;
  }
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

double sample_variance(std::span<const double> values) {
  require_count(values, 2, "sample_variance");
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return ss / static_cast<double>(values.size() - 1);
}

double quantile(std::span<const double> values, double q) {
  require_count(values, 1, "quantile");
  if (!(q >= 0.0 && q <= 1.0)) throw RangeError("quantile: q must lie in [0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double coefficient_of_variation(std::span<const double> values) {
  require_count(values, 2, "coefficient_of_variation");
  const double m = mean(values);
  if (m == 0.0) throw RangeError("coefficient_of_variation: mean is zero");
  return population_std(values) / std::abs(m);
}

EffectSize hedges_g(std::span<const double> group1, std::span<const double> group2) {
  require_count(group1, 2, "hedges_g");
  require_count(group2, 2, "hedges_g");
  const double n1 = static_cast<double>(group1.size());
  const double n2 = static_cast<double>(group2.size());
  const double pooled =
      ((n1 - 1.0) * sample_variance(group1) + (n2 - 1.0) * sample_variance(group2)) /
      (n1 + n2 - 2.0);
  if (!(pooled > 0.0)) throw RangeError("hedges_g: pooled variance is zero");
  const double correction = 1.0 - 3.0 / (4.0 * (n1 + n2) - 9.0);
  return {correction * (mean(group1) - mean(group2)) / std::sqrt(pooled), group1.size(),
          group2.size()};
}

GroupSummary group_summary(std::span<const double> values) {
  require_count(values, 1, "group_summary");
  GroupSummary s;
  s.n = values.size();
  s.mean = mean(values);
  s.std = population_std(values);
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  s.q1 = quantile(values, 0.25);
  s.median = quantile(values, 0.5);
  s.q3 = quantile(values, 0.75);
  return s;
}

std::vector<double> ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> r(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = shared;
    i = j + 1;
  }
  return r;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("pearson: length mismatch");
  require_count(x, 2, "pearson");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw RangeError("pearson: zero variance");
  return sxy / std::sqrt(sxx * syy);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  return pearson(rx, ry);
}

bool iqr_disjoint(const GroupSummary& a, const GroupSummary& b) {
  return a.q3 < b.q1 || b.q3 < a.q1;
}

}  // namespace graden
