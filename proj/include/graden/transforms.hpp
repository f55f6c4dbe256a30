#pragma once

#include <graden/image.hpp>

#include <span>
#include <vector>

namespace graden {

// Delay-1 embedding: row i is (x_i, ..., x_{i+m-1}); N - m + 1 rows.
Eigen::MatrixXd embed(const TimeSeries& series, Eigen::Index m);

// Euclidean distances between all pairs of embedded vectors. The result is
// symmetric with an exactly zero diagonal. Requires N >= m + 1.
GrayImage distance_matrix(const TimeSeries& series, Eigen::Index m);

// Windows start at 0, step, 2*step, ... while the whole window fits.
std::vector<TimeSeries> sliding_windows(const TimeSeries& series, Eigen::Index window,
                                        Eigen::Index step);

// The first `length` values.
TimeSeries prefix(const TimeSeries& series, Eigen::Index length);

// Per-pixel mean of exactly three channels of equal shape.
GrayImage grayscale(std::span<const GrayImage> channels);

// Block-average resampling. Output pixel (u, v) averages source rows
// [floor(u H / h), floor((u + 1) H / h)) and the analogous columns.
GrayImage downsample(const GrayImage& image, Eigen::Index target_rows, Eigen::Index target_cols);

}  // namespace graden
