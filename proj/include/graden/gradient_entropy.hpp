#pragma once

// Gradient entropy of a 2D image.
//
// Every 2x2 pixel block contributes a gradient triple (horizontal, vertical,
// diagonal) measured from its top-left pixel. All triples are pooled and
// z-scored together, each component is quantized to one of five symbols by
// the cut points (delta, gamma), and the entropy of the resulting 125-pattern
// histogram is normalized to [0, 1].

#include <graden/image.hpp>
#include <graden/shannon.hpp>

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

namespace graden {

inline constexpr double kDefaultQuantileA = 0.55;
inline constexpr double kDefaultQuantileB = 0.80;
inline constexpr int kSymbolCount = 5;
inline constexpr int kPatternCount = kSymbolCount * kSymbolCount * kSymbolCount;

// Standard normal inverse CDF. Defined on the open interval (0, 1).
double normal_quantile(double p);

// Symbolization cut points. Built either from normal-quantile levels (a, b)
// or from raw values; the quantile fields are NaN for raw thresholds.
struct Thresholds {
  double delta = 0.0;
  double gamma = 0.0;
  double quantile_a = std::numeric_limits<double>::quiet_NaN();
  double quantile_b = std::numeric_limits<double>::quiet_NaN();

  bool from_quantiles() const { return !std::isnan(quantile_a); }
};

// delta = Phi^-1(a), gamma = Phi^-1(b). Requires 0.5 < a < 0.75 < b < 1.
Thresholds quantile_thresholds(double a = kDefaultQuantileA, double b = kDefaultQuantileB);

// Raw cut points, bypassing the quantile-level ranges. Requires
// 0 <= delta < gamma, both finite.
Thresholds raw_thresholds(double delta, double gamma);

inline Thresholds default_thresholds() { return quantile_thresholds(); }

struct SymbolTriple {
  int horizontal = 0;
  int vertical = 0;
  int diagonal = 0;

  friend bool operator==(const SymbolTriple&, const SymbolTriple&) = default;
};

// Bijection between symbol triples and [0, 124].
constexpr int pattern_index(const SymbolTriple& s) {
  return (s.horizontal + 2) * 25 + (s.vertical + 2) * 5 + (s.diagonal + 2);
}

constexpr SymbolTriple pattern_from_index(int index) {
  return {index / 25 - 2, (index / 5) % 5 - 2, index % 5 - 2};
}

template <typename Scalar>
struct GradientField {
  Image<Scalar> horizontal;
  Image<Scalar> vertical;
  Image<Scalar> diagonal;
  bool standardized = false;

  Eigen::Index rows() const { return horizontal.rows(); }
  Eigen::Index cols() const { return horizontal.cols(); }
  Eigen::Index blocks() const { return horizontal.size(); }
};

struct PatternHistogram {
  std::array<std::uint64_t, kPatternCount> counts{};
  std::uint64_t total = 0;

  double probability(int index) const {
    return total == 0 ? 0.0 : static_cast<double>(counts[index]) / static_cast<double>(total);
  }
  std::vector<double> probabilities() const {
    std::vector<double> p(kPatternCount);
    for (int k = 0; k < kPatternCount; ++k) p[k] = probability(k);
    return p;
  }
  // Normalized Shannon entropy, natural log over log(125).
  double entropy() const { return normalized_shannon(counts, kPatternCount); }
};

template <typename Derived>
GradientField<typename Derived::Scalar> compute_gradients(const Eigen::MatrixBase<Derived>& image) {
  require_min_size(image, 2, 2, "compute_gradients");
  require_finite(image, "compute_gradients");
  const Eigen::Index h = image.rows() - 1;
  const Eigen::Index w = image.cols() - 1;
  GradientField<typename Derived::Scalar> field;
  const auto origin = image.topLeftCorner(h, w);
  field.horizontal = image.block(0, 1, h, w) - origin;
  field.vertical = image.block(1, 0, h, w) - origin;
  field.diagonal = image.bottomRightCorner(h, w) - origin;
  return field;
}

// Pooled z-score over all 3*(H-1)*(W-1) components with the population
// standard deviation. If every component is equal the result is all zeros.
template <typename Scalar>
GradientField<Scalar> standardize(GradientField<Scalar> field) {
  if (field.standardized) throw Error("standardize: field is already standardized");
  field.standardized = true;
  const Scalar first = field.horizontal(0, 0);
  const bool degenerate = (field.horizontal.array() == first).all() &&
                          (field.vertical.array() == first).all() &&
                          (field.diagonal.array() == first).all();
  if (degenerate) {
    field.horizontal.setZero();
    field.vertical.setZero();
    field.diagonal.setZero();
    return field;
  }
  const Scalar n = static_cast<Scalar>(3 * field.blocks());
  const Scalar mean = (field.horizontal.sum() + field.vertical.sum() + field.diagonal.sum()) / n;
  const Scalar ss = (field.horizontal.array() - mean).square().sum() +
                    (field.vertical.array() - mean).square().sum() +
                    (field.diagonal.array() - mean).square().sum();
  const Scalar sd = std::sqrt(ss / n);
  for (auto* g : {&field.horizontal, &field.vertical, &field.diagonal}) {
    *g = ((g->array() - mean) / sd).matrix();
  }
  return field;
}

// Left-open, right-closed bins: (-inf, -gamma], (-gamma, -delta],
// (-delta, delta], (delta, gamma], (gamma, inf).
// Written as a sum of comparisons so it compiles without branches.
template <typename Scalar>
constexpr int symbolize(Scalar value, const Thresholds& t) {
  const double v = static_cast<double>(value);
  return (v > -t.gamma) + (v > -t.delta) + (v > t.delta) + (v > t.gamma) - 2;
}

template <typename Scalar>
PatternHistogram pattern_histogram(const GradientField<Scalar>& field, const Thresholds& t) {
  if (!field.standardized) throw Error("pattern_histogram: field must be standardized first");
  PatternHistogram hist;
  for (Eigen::Index i = 0; i < field.rows(); ++i) {
    for (Eigen::Index j = 0; j < field.cols(); ++j) {
      const SymbolTriple s{symbolize(field.horizontal(i, j), t), symbolize(field.vertical(i, j), t),
                           symbolize(field.diagonal(i, j), t)};
      ++hist.counts[pattern_index(s)];
    }
  }
  hist.total = static_cast<std::uint64_t>(field.blocks());
  return hist;
}

template <typename Derived>
PatternHistogram gradient_histogram(const Eigen::MatrixBase<Derived>& image,
                                    const Thresholds& t = default_thresholds()) {
  return pattern_histogram(standardize(compute_gradients(image)), t);
}

template <typename Derived>
double graden(const Eigen::MatrixBase<Derived>& image, const Thresholds& t = default_thresholds()) {
  return gradient_histogram(image, t).entropy();
}

}  // namespace graden
