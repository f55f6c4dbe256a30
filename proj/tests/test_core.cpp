#include <graden/gradient_entropy.hpp>

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace graden;

TEST_CASE("normal quantile matches bisection and known values") {
  CHECK(normal_quantile(0.55) == doctest::Approx(0.12566134685507416).epsilon(1e-14));
  CHECK(normal_quantile(0.80) == doctest::Approx(0.8416212335729143).epsilon(1e-14));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  for (double p : {1e-10, 0.001, 0.02425, 0.1, 0.3, 0.7, 0.97575, 0.999, 1 - 1e-10}) {
    CHECK(std::abs(normal_quantile(p) - oracle::normal_quantile(p)) < 1e-12);
  }
  CHECK_THROWS_AS(normal_quantile(0.0), RangeError);
  CHECK_THROWS_AS(normal_quantile(1.0), RangeError);
}

TEST_CASE("quantile thresholds validate their ranges") {
  const auto t = quantile_thresholds(0.55, 0.8);
  CHECK(t.delta == doctest::Approx(0.12566134685507416).epsilon(1e-14));
  CHECK(t.gamma == doctest::Approx(0.8416212335729143).epsilon(1e-14));
  CHECK(t.from_quantiles());
  CHECK_THROWS_AS(quantile_thresholds(0.5, 0.8), RangeError);
  CHECK_THROWS_AS(quantile_thresholds(0.75, 0.8), RangeError);
  CHECK_THROWS_AS(quantile_thresholds(0.55, 0.75), RangeError);
  CHECK_THROWS_AS(quantile_thresholds(0.55, 1.0), RangeError);
  const auto raw = raw_thresholds(0.01, 3.0);
  CHECK_FALSE(raw.from_quantiles());
  CHECK_THROWS_AS(raw_thresholds(0.5, 0.5), RangeError);
  CHECK_THROWS_AS(raw_thresholds(-0.1, 0.5), RangeError);
}

TEST_CASE("gradients of a 2x2 block") {
  GrayImage x(2, 2);
  x << 1, 2, 3, 5;
  const auto f = compute_gradients(x);
  CHECK(f.horizontal(0, 0) == 1);
  CHECK(f.vertical(0, 0) == 2);
  CHECK(f.diagonal(0, 0) == 4);
  const auto z = standardize(f);
  CHECK(z.horizontal(0, 0) == doctest::Approx(-1.0690449676496976));
  CHECK(z.vertical(0, 0) == doctest::Approx(-0.2672612419124244));
  CHECK(z.diagonal(0, 0) == doctest::Approx(1.3363062095621219));
  const auto h = pattern_histogram(z, default_thresholds());
  CHECK(h.total == 1);
  CHECK(h.counts[pattern_index({-2, -1, 2})] == 1);
  CHECK(h.entropy() == 0.0);
}

TEST_CASE("gradient shapes and input validation") {
  GrayImage x = GrayImage::Random(5, 7);
  const auto f = compute_gradients(x);
  CHECK(f.rows() == 4);
  CHECK(f.cols() == 6);
  CHECK_THROWS_AS(compute_gradients(GrayImage(1, 5)), DimensionError);
  x(2, 3) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(graden::graden(x), NonFiniteError);
  CHECK_THROWS_AS(pattern_histogram(f, default_thresholds()), Error);
  CHECK_THROWS_AS(standardize(standardize(f)), Error);
}

TEST_CASE("symbol boundaries are left-open, right-closed") {
  const auto t = raw_thresholds(0.5, 1.5);
  CHECK(symbolize(-1.5, t) == -2);
  CHECK(symbolize(std::nextafter(-1.5, 0.0), t) == -1);
  CHECK(symbolize(-0.5, t) == -1);
  CHECK(symbolize(std::nextafter(-0.5, 0.0), t) == 0);
  CHECK(symbolize(0.5, t) == 0);
  CHECK(symbolize(std::nextafter(0.5, 1.0), t) == 1);
  CHECK(symbolize(1.5, t) == 1);
  CHECK(symbolize(std::nextafter(1.5, 2.0), t) == 2);
}

TEST_CASE("pattern indexing is a bijection") {
  for (int k = 0; k < kPatternCount; ++k) CHECK(pattern_index(pattern_from_index(k)) == k);
  CHECK(pattern_index({-2, -2, -2}) == 0);
  CHECK(pattern_index({0, 0, 0}) == 62);
  CHECK(pattern_index({2, 2, 2}) == 124);
}

TEST_CASE("constant and linear images have zero entropy") {
  CHECK(graden::graden(GrayImage::Constant(10, 12, 3.7)) == 0.0);
  GrayImage ramp(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) ramp(i, j) = 2.0 * i + 3.0 * j;
  CHECK(graden::graden(ramp) == 0.0);
}

TEST_CASE("histogram conservation and range") {
  std::mt19937_64 gen(7);
  for (int k = 0; k < 30; ++k) {
    const long h = 2 + static_cast<long>(gen() % 30), w = 2 + static_cast<long>(gen() % 30);
    const auto x = oracle::random_image<GrayImage>(gen, h, w);
    const auto hist = gradient_histogram(x);
    std::uint64_t sum = 0;
    for (auto c : hist.counts) sum += c;
    CHECK(sum == static_cast<std::uint64_t>((h - 1) * (w - 1)));
    CHECK(hist.total == sum);
    const auto p = hist.probabilities();
    CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) < 1e-12);
    const double e = hist.entropy();
    CHECK(e >= 0.0);
    CHECK(e <= 1.0);
  }
}

TEST_CASE("matches the naive oracle") {
  std::mt19937_64 gen(11);
  const auto t = default_thresholds();
  for (int k = 0; k < 60; ++k) {
    const long h = 2 + static_cast<long>(gen() % 40), w = 2 + static_cast<long>(gen() % 40);
    const auto x = oracle::random_image<GrayImage>(gen, h, w);
    const auto ref = oracle::graden(oracle::to_grid(x), t.delta, t.gamma);
    const auto hist = gradient_histogram(x, t);
    CHECK(std::equal(hist.counts.begin(), hist.counts.end(), ref.counts.begin()));
    CHECK(std::abs(hist.entropy() - ref.entropy) < 1e-12);
  }
}

TEST_CASE("affine and sign invariance") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.1, 50.0);
  for (int k = 0; k < 10; ++k) {
    const GrayImage x = oracle::random_image<GrayImage>(gen, 30, 25);
    const double base = graden::graden(x);
    const double alpha = u(gen), beta = u(gen) - 25.0;
    const double scaled = graden::graden(GrayImage((alpha * x.array() + beta).matrix()));
    CHECK(std::abs(scaled - base) < 1e-12);
    CHECK(std::abs(graden::graden(GrayImage(-x)) - base) < 1e-12);
  }
}

TEST_CASE("entropy is independent of the log base") {
  std::mt19937_64 gen(5);
  const auto x = oracle::random_image<GrayImage>(gen, 20, 20);
  const auto h = gradient_histogram(x);
  double h2 = 0;
  for (auto c : h.counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(h.total);
    h2 -= p * std::log2(p);
  }
  CHECK(std::abs(h2 / std::log2(125.0) - h.entropy()) < 1e-12);
}

TEST_CASE("uniform histogram has entropy one") {
  PatternHistogram h;
  h.counts.fill(4);
  h.total = 500;
  CHECK(std::abs(h.entropy() - 1.0) < 1e-12);
}

TEST_CASE("float images are supported") {
  std::mt19937_64 gen(9);
  const auto x = oracle::random_image<GrayImage>(gen, 16, 16);
  const Image<float> xf = x.cast<float>();
  const double ef = graden::graden(xf);
  CHECK(ef >= 0.0);
  CHECK(ef <= 1.0);
  CHECK(graden::graden(x.block(2, 3, 8, 9)) == graden::graden(GrayImage(x.block(2, 3, 8, 9))));
}
