#pragma once

// Loading images, signals and class-labeled dataset directories, and
// writing results. Raster formats: PGM/PPM (ASCII and binary, 8 or 16 bit)
// and PNG; plain-text matrices (.csv/.txt) are accepted as images too.
// Intensities are reals on [0, 255].

#include <graden/image.hpp>

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace graden {

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class UnsupportedFormatError : public Error {
 public:
  using Error::Error;
};

class CorruptFileError : public Error {
 public:
  using Error::Error;
};

class EmptyDatasetError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line) : Error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// One channel for gray sources, three (R, G, B) for color ones.
struct Raster {
  std::vector<GrayImage> channels;
};

Raster read_raster(const std::filesystem::path& path);

// Color rasters are reduced to gray by the per-pixel RGB mean.
GrayImage load_image(const std::filesystem::path& path);

// Whitespace- or comma-delimited rows of numbers.
GrayImage load_matrix(const std::filesystem::path& path);

// One value per line, or comma/whitespace separated on any number of lines.
TimeSeries load_signal(const std::filesystem::path& path);

struct LabeledSample {
  std::string label;
  std::filesystem::path source;
  GrayImage image;
};

struct LabeledSignal {
  std::string label;
  std::filesystem::path source;
  TimeSeries signal;
};

struct LoadFailure {
  std::filesystem::path source;
  std::string message;
};

template <typename Sample>
struct DatasetLoad {
  std::vector<Sample> samples;
  std::vector<LoadFailure> failures;
};

// Walks root/<class>/<file> in sorted order. Unreadable files are reported
// in `failures`; throws EmptyDatasetError when no sample loads.
DatasetLoad<LabeledSample> load_dataset(const std::filesystem::path& root);
DatasetLoad<LabeledSignal> load_signal_dataset(const std::filesystem::path& root);

// 8-bit binary PGM; values are rounded and clamped to [0, 255].
void write_pgm(const std::filesystem::path& path, const GrayImage& image);
// 8-bit PNG, gray (one channel) or RGB (three channels).
void write_png(const std::filesystem::path& path, const Raster& raster);

std::string format_double(double v);
std::string matrix_to_csv(const Eigen::Ref<const Eigen::MatrixXd>& m);

// RFC 4180 field quoting.
std::string csv_field(std::string_view field);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_string() const;
};

// Writes to a sibling temporary file and renames it into place.
void atomic_write(const std::filesystem::path& path, std::string_view content);

}  // namespace graden
