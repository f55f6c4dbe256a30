#include <graden/transforms.hpp>

#include <string>

namespace graden {

Eigen::MatrixXd embed(const TimeSeries& series, Eigen::Index m) {
  if (m < 1) throw RangeError("embed: m must be >= 1");
  if (series.size() < m) {
    throw DimensionError("embed: series of length " + std::to_string(series.size()) +
                         " is shorter than m=" + std::to_string(m));
  }
  const Eigen::Index count = series.size() - m + 1;
  Eigen::MatrixXd vectors(count, m);
  for (Eigen::Index i = 0; i < count; ++i) vectors.row(i) = series.segment(i, m).transpose();
  return vectors;
}

GrayImage distance_matrix(const TimeSeries& series, Eigen::Index m) {
  if (series.size() < m + 1) {
    throw DimensionError("distance_matrix: need at least m+1=" + std::to_string(m + 1) +
                         " samples, got " + std::to_string(series.size()));
  }
  require_finite(series, "distance_matrix");
  const Eigen::MatrixXd v = embed(series, m);
  const Eigen::Index n = v.rows();
  GrayImage d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dist = (v.row(i) - v.row(j)).norm();
      d(i, j) = dist;
      d(j, i) = dist;
    }
  }
  return d;
}

std::vector<TimeSeries> sliding_windows(const TimeSeries& series, Eigen::Index window,
                                        Eigen::Index step) {
  if (window < 1) throw RangeError("sliding_windows: window must be >= 1");
  if (step < 1) throw RangeError("sliding_windows: step must be >= 1");
  if (window > series.size()) {
    throw DimensionError("sliding_windows: window " + std::to_string(window) +
                         " exceeds series length " + std::to_string(series.size()));
  }
  std::vector<TimeSeries> out;
  out.reserve(static_cast<std::size_t>((series.size() - window) / step + 1));
  for (Eigen::Index start = 0; start + window <= series.size(); start += step) {
    out.emplace_back(series.segment(start, window));
  }
  return out;
}

TimeSeries prefix(const TimeSeries& series, Eigen::Index length) {
  if (length < 1 || length > series.size()) {
    throw DimensionError("prefix: length " + std::to_string(length) + " out of range for series of " +
                         std::to_string(series.size()));
  }
  return series.head(length);
}

GrayImage grayscale(std::span<const GrayImage> channels) {
  if (channels.size() != 3) {
    throw DimensionError("grayscale: expected 3 channels, got " + std::to_string(channels.size()));
  }
  const auto& r = channels[0];
  for (const auto& c : channels) {
    if (c.rows() != r.rows() || c.cols() != r.cols()) {
      throw DimensionError("grayscale: channel shapes differ");
    }
    require_finite(c, "grayscale");
  }
  return (channels[0] + channels[1] + channels[2]) / 3.0;
}

GrayImage downsample(const GrayImage& image, Eigen::Index target_rows, Eigen::Index target_cols) {
  if (target_rows < 1 || target_cols < 1) throw DimensionError("downsample: empty target");
  if (target_rows > image.rows() || target_cols > image.cols()) {
    throw DimensionError("downsample: cannot upsample " + std::to_string(image.rows()) + "x" +
                         std::to_string(image.cols()) + " to " + std::to_string(target_rows) +
                         "x" + std::to_string(target_cols));
  }
  if (target_rows == image.rows() && target_cols == image.cols()) return image;
  GrayImage out(target_rows, target_cols);
  const Eigen::Index h = image.rows();
  const Eigen::Index w = image.cols();
  for (Eigen::Index u = 0; u < target_rows; ++u) {
    const Eigen::Index r0 = u * h / target_rows;
    const Eigen::Index r1 = (u + 1) * h / target_rows;
    for (Eigen::Index v = 0; v < target_cols; ++v) {
      const Eigen::Index c0 = v * w / target_cols;
      const Eigen::Index c1 = (v + 1) * w / target_cols;
      out(u, v) = image.block(r0, c0, r1 - r0, c1 - c0).mean();
    }
  }
  return out;
}

}  // namespace graden
