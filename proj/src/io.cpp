#include <graden/io.hpp>
#include <graden/transforms.hpp>

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <system_error>

#include <unistd.h>

namespace fs = std::filesystem;

namespace graden {

namespace {

std::string read_file(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) throw NotFoundError("file not found: " + path.string());
  if (fs::is_directory(path, ec)) throw UnsupportedFormatError("is a directory: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open file: " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool parse_number(std::string_view token, double& out) {
  while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front()))) token.remove_prefix(1);
  while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back()))) token.remove_suffix(1);
  if (token.empty()) return false;
  if (token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size() && std::isfinite(out);
}

// Splits a line on commas, semicolons, tabs and spaces; empty fields between
// consecutive whitespace are skipped.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  const auto is_sep = [](char c) { return c == ',' || c == ';' || c == ' ' || c == '\t' || c == '\r'; };
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || is_sep(line[i])) {
      if (i > start) fields.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return fields;
}

class PnmReader {
 public:
  PnmReader(const std::string& bytes, const fs::path& path) : bytes_(bytes), path_(path) {}

  Raster read() {
    const char kind = bytes_[1];
    const bool ascii = kind == '2' || kind == '3';
    const int channels = (kind == '3' || kind == '6') ? 3 : 1;
    pos_ = 2;
    const long width = next_header_int();
    const long height = next_header_int();
    const long maxval = next_header_int();
    if (width < 1 || height < 1 || maxval < 1 || maxval > 65535) corrupt("bad header");
    Raster raster;
    raster.channels.assign(static_cast<std::size_t>(channels), GrayImage(height, width));
    const double scale = 255.0 / static_cast<double>(maxval);

    if (!ascii) {
      // Exactly one whitespace byte separates the header from the raster.
      if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) corrupt("bad header");
      ++pos_;
    }
    const std::size_t sample_bytes = maxval < 256 ? 1 : 2;
    const auto total = static_cast<std::size_t>(width * height * channels);
    if (!ascii && bytes_.size() - pos_ < total * sample_bytes) corrupt("truncated raster data");

    for (long i = 0; i < height; ++i) {
      for (long j = 0; j < width; ++j) {
        for (int c = 0; c < channels; ++c) {
          long v = 0;
          if (ascii) {
            v = next_int();
          } else if (sample_bytes == 1) {
            v = static_cast<unsigned char>(bytes_[pos_++]);
          } else {
            v = (static_cast<unsigned char>(bytes_[pos_]) << 8) | static_cast<unsigned char>(bytes_[pos_ + 1]);
            pos_ += 2;
          }
          if (v > maxval) corrupt("sample exceeds maxval");
          raster.channels[static_cast<std::size_t>(c)](i, j) =
              maxval == 255 ? static_cast<double>(v) : static_cast<double>(v) * scale;
        }
      }
    }
    return raster;
  }

 private:
  [[noreturn]] void corrupt(const std::string& why) const {
    throw CorruptFileError("corrupt image " + path_.string() + ": " + why);
  }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long next_int() {
    skip_space_and_comments();
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (pos_ == start) corrupt(pos_ >= bytes_.size() ? "truncated data" : "expected an integer");
    long v = 0;
    std::from_chars(bytes_.data() + start, bytes_.data() + pos_, v);
    return v;
  }

  long next_header_int() { return next_int(); }

  const std::string& bytes_;
  const fs::path& path_;
  std::size_t pos_ = 0;
};

Raster read_png(const std::string& bytes, const fs::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw CorruptFileError("corrupt image " + path.string() + ": " + image.message);
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGBA : PNG_FORMAT_GA;
  const int stride_channels = color ? 4 : 2;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw CorruptFileError("corrupt image " + path.string() + ": " + msg);
  }
  const Eigen::Index h = image.height;
  const Eigen::Index w = image.width;
  Raster raster;
  raster.channels.assign(color ? 3 : 1, GrayImage(h, w));
  for (Eigen::Index i = 0; i < h; ++i) {
    for (Eigen::Index j = 0; j < w; ++j) {
      const png_byte* px = buffer.data() + (i * w + j) * stride_channels;
      for (std::size_t c = 0; c < raster.channels.size(); ++c) raster.channels[c](i, j) = px[c];
    }
  }
  return raster;
}

bool has_text_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".csv" || ext == ".txt" || ext == ".tsv";
}

template <typename Sample, typename Loader>
DatasetLoad<Sample> walk_dataset(const fs::path& root, Loader load) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw NotFoundError("dataset root not found: " + root.string());
  std::vector<fs::path> classes;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && entry.path().filename().string().front() != '.') {
      classes.push_back(entry.path());
    }
  }
  std::sort(classes.begin(), classes.end());

  DatasetLoad<Sample> result;
  for (const auto& dir : classes) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().filename().string().front() != '.') {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      try {
        result.samples.push_back({dir.filename().string(), file, load(file)});
      } catch (const Error& e) {
        result.failures.push_back({file, e.what()});
      }
    }
  }
  if (result.samples.empty()) {
    throw EmptyDatasetError("no readable samples under " + root.string());
  }
  return result;
}

}  // namespace

Raster read_raster(const fs::path& path) {
  const std::string bytes = read_file(path);
  static constexpr std::array<unsigned char, 8> png_magic{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::equal(png_magic.begin(), png_magic.end(), bytes.begin(),
                                      [](unsigned char m, char b) { return m == static_cast<unsigned char>(b); })) {
    return read_png(bytes, path);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && std::string_view("2356").find(bytes[1]) != std::string_view::npos) {
    return PnmReader(bytes, path).read();
  }
  if (has_text_extension(path)) return Raster{{load_matrix(path)}};
  throw UnsupportedFormatError("unsupported image format: " + path.string());
}

GrayImage load_image(const fs::path& path) {
  Raster raster = read_raster(path);
  if (raster.channels.size() == 3) return grayscale(raster.channels);
  return std::move(raster.channels.front());
}

GrayImage load_matrix(const fs::path& path) {
  const std::string text = read_file(path);
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) {
      double v = 0.0;
      if (!parse_number(f, v)) {
        throw ParseError(path.string() + ":" + std::to_string(line_no) + ": not a finite number: '" +
                             std::string(f) + "'",
                         line_no);
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": ragged row", line_no);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw CorruptFileError("empty matrix file: " + path.string());
  GrayImage m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

TimeSeries load_signal(const fs::path& path) {
  const std::string text = read_file(path);
  std::vector<double> values;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    for (auto f : split_fields(line)) {
      double v = 0.0;
      if (!parse_number(f, v)) {
        throw ParseError(path.string() + ":" + std::to_string(line_no) + ": not a finite number: '" +
                             std::string(f) + "'",
                         line_no);
      }
      values.push_back(v);
    }
  }
  if (values.empty()) throw ParseError(path.string() + ": no values", line_no);
  return Eigen::Map<const TimeSeries>(values.data(), static_cast<Eigen::Index>(values.size()));
}

DatasetLoad<LabeledSample> load_dataset(const fs::path& root) {
  return walk_dataset<LabeledSample>(root, [](const fs::path& p) { return load_image(p); });
}

DatasetLoad<LabeledSignal> load_signal_dataset(const fs::path& root) {
  return walk_dataset<LabeledSignal>(root, [](const fs::path& p) { return load_signal(p); });
}

void write_pgm(const fs::path& path, const GrayImage& image) {
  std::string out = "P5\n" + std::to_string(image.cols()) + " " + std::to_string(image.rows()) + "\n255\n";
  out.reserve(out.size() + static_cast<std::size_t>(image.size()));
  for (Eigen::Index i = 0; i < image.rows(); ++i)
    for (Eigen::Index j = 0; j < image.cols(); ++j)
      out.push_back(static_cast<char>(static_cast<unsigned char>(std::clamp(std::round(image(i, j)), 0.0, 255.0))));
  atomic_write(path, out);
}

void write_png(const fs::path& path, const Raster& raster) {
  if (raster.channels.size() != 1 && raster.channels.size() != 3) {
    throw DimensionError("write_png: need 1 or 3 channels");
  }
  const auto& first = raster.channels.front();
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(first.cols());
  image.height = static_cast<png_uint_32>(first.rows());
  image.format = raster.channels.size() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const auto nc = raster.channels.size();
  std::vector<png_byte> buffer(static_cast<std::size_t>(first.size()) * nc);
  for (Eigen::Index i = 0; i < first.rows(); ++i)
    for (Eigen::Index j = 0; j < first.cols(); ++j)
      for (std::size_t c = 0; c < nc; ++c)
        buffer[(static_cast<std::size_t>(i * first.cols() + j)) * nc + c] =
            static_cast<png_byte>(std::clamp(std::round(raster.channels[c](i, j)), 0.0, 255.0));
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, buffer.data(), 0, nullptr)) {
    throw Error("write_png: " + std::string(image.message));
  }
  std::string bytes(size, '\0');
  if (!png_image_write_to_memory(&image, bytes.data(), &size, 0, buffer.data(), 0, nullptr)) {
    throw Error("write_png: " + std::string(image.message));
  }
  bytes.resize(size);
  atomic_write(path, bytes);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string matrix_to_csv(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string CsvTable::to_string() const {
  std::string out;
  const auto append_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_field(row[i]);
    }
    out += "\r\n";
  };
  append_row(header);
  for (const auto& row : rows) append_row(row);
  return out;
}

void atomic_write(const fs::path& path, std::string_view content) {
  const fs::path target = fs::absolute(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace graden
