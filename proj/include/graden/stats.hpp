#pragma once

#include <graden/image.hpp>

#include <cstddef>
#include <span>
#include <vector>

namespace graden {

struct GroupSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;  // population
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;

  double iqr() const { return q3 - q1; }
};

struct EffectSize {
  double g = 0.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

double mean(std::span<const double> values);
double population_std(std::span<const double> values);
double sample_variance(std::span<const double> values);

// Linear interpolation between order statistics (R type 7). q in [0, 1].
double quantile(std::span<const double> values, double q);

// Population std over |mean|. Needs n >= 2 and a nonzero mean.
double coefficient_of_variation(std::span<const double> values);

// Bias-corrected standardized mean difference (group1 - group2):
// J (m1 - m2) / s_pooled with J = 1 - 3 / (4 (n1 + n2) - 9).
EffectSize hedges_g(std::span<const double> group1, std::span<const double> group2);

GroupSummary group_summary(std::span<const double> values);

// Average ranks (1-based), ties share their mean rank.
std::vector<double> ranks(std::span<const double> values);

double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);

// Closed intervals [q1, q3] of two groups share no point.
bool iqr_disjoint(const GroupSummary& a, const GroupSummary& b);

}  // namespace graden
