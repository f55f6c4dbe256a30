#include <graden/generators.hpp>

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace graden {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(master);
  for (auto step : path) h = splitmix64(h ^ splitmix64(step + 0x632be59bd9b4e019ULL));
  return h;
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : engine_(derive_seed(seed, {0x5eedULL, stream})) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  // 1 - uniform() lies in (0, 1], keeping the log finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

double spectral_exponent(NoiseColor color) {
  switch (color) {
    case NoiseColor::White: return 0.0;
    case NoiseColor::Pink: return 1.0;
    case NoiseColor::Red: return 2.0;
    case NoiseColor::Blue: return -1.0;
  }
  return 0.0;
}

std::string_view to_string(NoiseColor color) {
  switch (color) {
    case NoiseColor::White: return "white";
    case NoiseColor::Pink: return "pink";
    case NoiseColor::Red: return "red";
    case NoiseColor::Blue: return "blue";
  }
  return "white";
}

NoiseColor parse_noise_color(std::string_view name) {
  if (name == "white") return NoiseColor::White;
  if (name == "pink") return NoiseColor::Pink;
  if (name == "red" || name == "brown") return NoiseColor::Red;
  if (name == "blue") return NoiseColor::Blue;
  throw RangeError("unknown noise color '" + std::string(name) + "'");
}

TimeSeries colored_noise_1d(double beta, Eigen::Index length, std::uint64_t seed) {
  if (length < 8) throw DimensionError("colored_noise_1d: length must be >= 8");
  if (!std::isfinite(beta)) throw RangeError("colored_noise_1d: beta must be finite");

  Rng rng(seed);
  std::vector<double> white(static_cast<std::size_t>(length));
  for (auto& w : white) w = rng.normal();

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, white);
  const auto n = static_cast<std::size_t>(length);
  spectrum[0] = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double f = static_cast<double>(std::min(k, n - k));
    spectrum[k] *= std::pow(f, -0.5 * beta);
  }
  std::vector<double> shaped;
  fft.inv(shaped, spectrum);

  TimeSeries out = Eigen::Map<const TimeSeries>(shaped.data(), length);
  const double mean = out.mean();
  out.array() -= mean;
  const double sd = std::sqrt(out.squaredNorm() / static_cast<double>(length));
  out /= sd;
  return out;
}

GrayImage noise_image(const NoiseSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1) throw DimensionError("noise_image: empty shape");
  const TimeSeries series = colored_noise_1d(spec.beta, spec.rows * spec.cols, spec.seed);
  return Eigen::Map<const GrayImage>(series.data(), spec.rows, spec.cols);
}

GrayImage sine_image(Eigen::Index rows, Eigen::Index cols) {
  GrayImage x(rows, cols);
  constexpr double w = 2.0 * std::numbers::pi / 12.0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      x(i, j) = std::sin(w * static_cast<double>(i + 1)) + std::sin(w * static_cast<double>(j + 1));
  return x;
}

namespace {

void check_mix(const MixSpec& spec) {
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) {
    throw RangeError("mix2d: p must lie in [0, 1], got " + std::to_string(spec.p));
  }
  if (spec.rows < 1 || spec.cols < 1) throw DimensionError("mix2d: empty shape");
}

}  // namespace

Image<bool> mix2d_mask(const MixSpec& spec) {
  check_mix(spec);
  Image<bool> z = Image<bool>::Constant(spec.rows, spec.cols, false);
  if (spec.p == 0.0) return z;
  Rng rng(spec.seed, 2);
  for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = rng.uniform() < spec.p;
  return z;
}

GrayImage mix2d(const MixSpec& spec) {
  check_mix(spec);
  GrayImage x = sine_image(spec.rows, spec.cols);
  if (spec.p == 0.0) return x;
  const Image<bool> z = mix2d_mask(spec);
  Rng rng(spec.seed, 1);
  const double half_width = std::sqrt(3.0);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double y = rng.uniform(-half_width, half_width);
    if (z.data()[i]) x.data()[i] = y;
  }
  return x;
}

TimeSeries logistic_series(const LogisticSpec& spec) {
  if (!(spec.a > 0.0 && spec.a <= 4.0)) {
    throw RangeError("logistic_series: a must lie in (0, 4], got " + std::to_string(spec.a));
  }
  if (!(spec.x0 > 0.0 && spec.x0 < 1.0)) {
    throw RangeError("logistic_series: x0 must lie in (0, 1), got " + std::to_string(spec.x0));
  }
  if (spec.n < 1) throw DimensionError("logistic_series: n must be >= 1");
  if (spec.burn_in < 0) throw RangeError("logistic_series: burn_in must be >= 0");
  double x = spec.x0;
  for (Eigen::Index i = 0; i < spec.burn_in; ++i) x = spec.a * x * (1.0 - x);
  TimeSeries out(spec.n);
  for (Eigen::Index i = 0; i < spec.n; ++i) {
    out[i] = x;
    x = spec.a * x * (1.0 - x);
  }
  return out;
}

GrayImage gaussian_image(Eigen::Index rows, Eigen::Index cols, double variance,
                         std::uint64_t seed) {
  if (!(variance >= 0.0)) throw RangeError("gaussian_image: variance must be >= 0");
  GrayImage g(rows, cols);
  if (variance == 0.0) {
    g.setZero();
    return g;
  }
  Rng rng(seed);
  const double sd = std::sqrt(variance);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = sd * rng.normal();
  return g;
}

}  // namespace graden
