#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>

namespace graden {

// Images are dense row-major matrices: element (i, j) is row i, column j,
// and the flat storage order matches the reshape order used by the noise
// generators.
template <typename Scalar>
using Image = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using GrayImage = Image<double>;
using TimeSeries = Eigen::VectorXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

template <typename Derived>
void require_min_size(const Eigen::DenseBase<Derived>& image, Eigen::Index min_rows,
                      Eigen::Index min_cols, const char* what) {
  if (image.rows() < min_rows || image.cols() < min_cols) {
    throw DimensionError(std::string(what) + ": image is " + std::to_string(image.rows()) + "x" +
                         std::to_string(image.cols()) + ", need at least " +
                         std::to_string(min_rows) + "x" + std::to_string(min_cols));
  }
}

template <typename Derived>
void require_finite(const Eigen::DenseBase<Derived>& data, const char* what) {
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      if (!std::isfinite(static_cast<double>(data(i, j)))) {
        throw NonFiniteError(std::string(what) + ": non-finite value at (" + std::to_string(i) +
                             ", " + std::to_string(j) + ")");
      }
    }
  }
}

}  // namespace graden
