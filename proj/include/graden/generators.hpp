#pragma once

// Seeded synthesis of the simulated datasets: colored noise (1D and
// reshaped to 2D), the sine/uniform MIX process, and logistic-map series.
//
// Reproducibility: all randomness comes from Rng, a std::mt19937_64 whose
// seed is SplitMix64-mixed from (seed, stream). Uniform and normal variates
// are produced by fixed bit-level recipes rather than <random>
// distributions, so a given (seed, stream) yields the same doubles with
// any conforming standard library.

#include <graden/image.hpp>

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <string>
#include <string_view>

namespace graden {

std::uint64_t splitmix64(std::uint64_t x);

// Hash a master seed and a path of indices into an independent child seed.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }
  // 53-bit uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Box-Muller; the second variate of each pair is kept for the next call.
  double normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

enum class NoiseColor { White, Pink, Red, Blue };

// Spectral exponent: white 0, pink 1, red 2, blue -1.
double spectral_exponent(NoiseColor color);
std::string_view to_string(NoiseColor color);
NoiseColor parse_noise_color(std::string_view name);

struct NoiseSpec {
  double beta = 0.0;
  Eigen::Index rows = 100;
  Eigen::Index cols = 100;
  std::uint64_t seed = 0;
};

struct MixSpec {
  double p = 0.5;
  Eigen::Index rows = 100;
  Eigen::Index cols = 100;
  std::uint64_t seed = 0;
};

struct LogisticSpec {
  double a = 4.0;
  double x0 = 0.3;
  Eigen::Index n = 150;
  Eigen::Index burn_in = 0;
};

// Gaussian white noise shaped in the frequency domain by f^(-beta/2)
// (DC removed), transformed back and standardized to mean 0 and population
// std 1. Requires length >= 8.
TimeSeries colored_noise_1d(double beta, Eigen::Index length, std::uint64_t seed);

// colored_noise_1d of length rows*cols, reshaped row-major.
GrayImage noise_image(const NoiseSpec& spec);

// The deterministic part of the MIX process:
// sin(2 pi i / 12) + sin(2 pi j / 12) with 1-based i, j.
GrayImage sine_image(Eigen::Index rows, Eigen::Index cols);

// (1 - Z) X + Z Y with Y ~ U[-sqrt 3, sqrt 3] and Z ~ Bernoulli(p), drawn
// from separate streams of spec.seed (Y: stream 1, Z: stream 2). The
// output for p = 0 is exactly sine_image.
GrayImage mix2d(const MixSpec& spec);

// Where mix2d took the pixel from the uniform image.
Image<bool> mix2d_mask(const MixSpec& spec);

// x_{i+1} = a x_i (1 - x_i), burn_in iterates discarded, n values returned
// starting with x0 when burn_in is 0.
TimeSeries logistic_series(const LogisticSpec& spec);

// Image of i.i.d. N(0, variance) values, used to perturb MIX images.
GrayImage gaussian_image(Eigen::Index rows, Eigen::Index cols, double variance,
                         std::uint64_t seed);

}  // namespace graden
