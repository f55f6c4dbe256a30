#pragma once

// Reference 2D entropy measures used for comparison: sample entropy,
// distribution entropy and permutation entropy over square sliding windows
// with unit stride. Window distances are Chebyshev (max-abs).

#include <graden/image.hpp>
#include <graden/shannon.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace graden {

struct SampEn2DParams {
  int m = 2;
  double r = 0.2;  // fraction of the image's population std
};

struct DistrEn2DParams {
  int m = 2;
  int bins = 128;
};

inline constexpr int kOrdinalPatternCount = 24;

namespace detail {

template <typename Derived>
double population_std(const Eigen::MatrixBase<Derived>& x) {
  const double n = static_cast<double>(x.size());
  const double mean = x.template cast<double>().sum() / n;
  return std::sqrt((x.template cast<double>().array() - mean).square().sum() / n);
}

inline bool windows_within(const double* data, Eigen::Index stride, Eigen::Index p,
                           Eigen::Index q, int k, double tol) {
  for (int a = 0; a < k; ++a) {
    const double* u = data + p + a * stride;
    const double* v = data + q + a * stride;
    for (int b = 0; b < k; ++b) {
      if (std::abs(u[b] - v[b]) > tol) return false;
    }
  }
  return true;
}

// True when the cells added by growing an m-window to (m+1) are within tol.
inline bool border_within(const double* data, Eigen::Index stride, Eigen::Index p, Eigen::Index q,
                          int m, double tol) {
  for (int a = 0; a < m; ++a) {
    if (std::abs(data[p + a * stride + m] - data[q + a * stride + m]) > tol) return false;
  }
  const double* u = data + p + m * stride;
  const double* v = data + q + m * stride;
  for (int b = 0; b <= m; ++b) {
    if (std::abs(u[b] - v[b]) > tol) return false;
  }
  return true;
}

}  // namespace detail

// Match counts behind sample entropy: B pairs of m-windows and A pairs of
// (m+1)-windows within tolerance, over the same (H-m) x (W-m) anchors,
// self-matches excluded, each unordered pair counted once.
struct SampEnCounts {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
};

template <typename Derived>
SampEnCounts sampen2d_counts(const Eigen::MatrixBase<Derived>& image, const SampEn2DParams& p) {
  if (p.m < 1) throw RangeError("sampen2d: m must be >= 1");
  if (!(p.r > 0.0)) throw RangeError("sampen2d: r must be > 0");
  require_min_size(image, p.m + 1, p.m + 1, "sampen2d");
  require_finite(image, "sampen2d");

  const GrayImage x = image.template cast<double>();
  const double tol = p.r * detail::population_std(x);
  const Eigen::Index stride = x.cols();
  const Eigen::Index rows = x.rows() - p.m;
  const Eigen::Index cols = x.cols() - p.m;

  std::vector<Eigen::Index> anchors;
  anchors.reserve(static_cast<std::size_t>(rows * cols));
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) anchors.push_back(i * stride + j);

  SampEnCounts counts;
  const double* data = x.data();
  for (std::size_t s = 0; s < anchors.size(); ++s) {
    for (std::size_t t = s + 1; t < anchors.size(); ++t) {
      if (!detail::windows_within(data, stride, anchors[s], anchors[t], p.m, tol)) continue;
      ++counts.b;
      if (detail::border_within(data, stride, anchors[s], anchors[t], p.m, tol)) ++counts.a;
    }
  }
  return counts;
}

// -log(A/B). Undefined (nullopt) when either count is zero.
template <typename Derived>
std::optional<double> sampen2d(const Eigen::MatrixBase<Derived>& image,
                               const SampEn2DParams& p = {}) {
  const auto c = sampen2d_counts(image, p);
  if (c.a == 0 || c.b == 0) return std::nullopt;
  const double v = -std::log(static_cast<double>(c.a) / static_cast<double>(c.b));
  return v == 0.0 ? 0.0 : v;
}

namespace detail {

// Max over each k x k window of `d`; output is (rows - k + 1) x (cols - k + 1).
inline Eigen::ArrayXXd sliding_max(const Eigen::ArrayXXd& d, int k) {
  if (k == 1) return d;
  const Eigen::Index r = d.rows() - k + 1;
  const Eigen::Index c = d.cols() - k + 1;
  Eigen::ArrayXXd row_max = d.leftCols(c);
  for (int b = 1; b < k; ++b) row_max = row_max.max(d.middleCols(b, c));
  Eigen::ArrayXXd out = row_max.topRows(r);
  for (int a = 1; a < k; ++a) out = out.max(row_max.middleRows(a, r));
  return out;
}

// Calls fn(window_max_array) once per displacement between distinct window
// anchors, covering every unordered pair of k x k windows exactly once. With
// `windowed` false, fn receives the raw per-pixel |difference| block instead,
// whose maximum equals the maximum window distance for that displacement.
template <typename Fn>
void for_each_displacement(const Eigen::ArrayXXd& x, int k, bool windowed, Fn fn) {
  const Eigen::Index rows = x.rows() - k + 1;
  const Eigen::Index cols = x.cols() - k + 1;
  for (Eigen::Index di = 0; di < rows; ++di) {
    for (Eigen::Index dj = -(cols - 1); dj < cols; ++dj) {
      if (di == 0 && dj <= 0) continue;
      const Eigen::Index n_rows = rows - di;
      const Eigen::Index n_cols = cols - std::abs(dj);
      const Eigen::Index j0 = std::max<Eigen::Index>(0, -dj);
      const Eigen::Index h = n_rows + k - 1;
      const Eigen::Index w = n_cols + k - 1;
      const Eigen::ArrayXXd diff = (x.block(di, j0 + dj, h, w) - x.block(0, j0, h, w)).abs();
      if (windowed) {
        fn(sliding_max(diff, k));
      } else {
        fn(diff);
      }
    }
  }
}

}  // namespace detail

// Histogram of all pairwise Chebyshev distances between m x m windows,
// equal-width bins over [0, max distance]. A distance d lands in bin
// floor(d / max * bins), with d = max in the last bin.
template <typename Derived>
std::vector<std::uint64_t> distren2d_histogram(const Eigen::MatrixBase<Derived>& image,
                                               const DistrEn2DParams& p) {
  if (p.m < 1) throw RangeError("distren2d: m must be >= 1");
  if (p.bins < 2) throw RangeError("distren2d: bins must be >= 2");
  require_min_size(image, p.m + 1, p.m + 1, "distren2d");
  require_finite(image, "distren2d");

  const Eigen::ArrayXXd x = image.template cast<double>().array();
  double dmax = 0.0;
  detail::for_each_displacement(x, p.m, false, [&](const Eigen::ArrayXXd& d) {
    dmax = std::max(dmax, d.maxCoeff());
  });

  std::vector<std::uint64_t> hist(static_cast<std::size_t>(p.bins), 0);
  const auto windows = static_cast<std::uint64_t>((x.rows() - p.m + 1) * (x.cols() - p.m + 1));
  if (dmax == 0.0) {
    hist[0] = windows * (windows - 1) / 2;
    return hist;
  }
  const auto last = static_cast<std::size_t>(p.bins - 1);
  detail::for_each_displacement(x, p.m, true, [&](const Eigen::ArrayXXd& d) {
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      const auto k = static_cast<std::size_t>(d.data()[i] / dmax * p.bins);
      ++hist[std::min(k, last)];
    }
  });
  return hist;
}

template <typename Derived>
double distren2d(const Eigen::MatrixBase<Derived>& image, const DistrEn2DParams& p = {}) {
  const auto hist = distren2d_histogram(image, p);
  return normalized_shannon(hist, static_cast<std::size_t>(p.bins));
}

// Lehmer code of the stable argsort of four values, in [0, 24).
inline int ordinal_pattern(const std::array<double, 4>& v) {
  std::array<int, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](int l, int r) { return v[l] < v[r]; });
  int code = 0;
  for (int i = 0; i < 4; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < 4; ++j) smaller += order[j] < order[i];
    static constexpr int factorial[] = {6, 2, 1, 1};
    code += smaller * factorial[i];
  }
  return code;
}

// Ordinal patterns of every 2x2 block, flattened row-major.
template <typename Derived>
std::array<std::uint64_t, kOrdinalPatternCount> peren2d_histogram(
    const Eigen::MatrixBase<Derived>& image) {
  require_min_size(image, 2, 2, "peren2d");
  require_finite(image, "peren2d");
  std::array<std::uint64_t, kOrdinalPatternCount> hist{};
  for (Eigen::Index i = 0; i + 1 < image.rows(); ++i) {
    for (Eigen::Index j = 0; j + 1 < image.cols(); ++j) {
      const std::array<double, 4> block{
          static_cast<double>(image(i, j)), static_cast<double>(image(i, j + 1)),
          static_cast<double>(image(i + 1, j)), static_cast<double>(image(i + 1, j + 1))};
      ++hist[static_cast<std::size_t>(ordinal_pattern(block))];
    }
  }
  return hist;
}

template <typename Derived>
double peren2d(const Eigen::MatrixBase<Derived>& image) {
  return normalized_shannon(peren2d_histogram(image), kOrdinalPatternCount);
}

}  // namespace graden
