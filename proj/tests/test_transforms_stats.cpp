#include <graden/stats.hpp>
#include <graden/transforms.hpp>

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace graden;

TEST_CASE("embedding and distance matrix") {
  TimeSeries s(4);
  s << 1, 2, 3, 4;
  const auto e = embed(s, 2);
  CHECK(e.rows() == 3);
  CHECK(e(2, 1) == 4);
  const auto d = distance_matrix(s, 2);
  CHECK(d.rows() == 3);
  CHECK(d(0, 2) == doctest::Approx(std::sqrt(8.0)));
  CHECK(d(0, 1) == doctest::Approx(std::sqrt(2.0)));
  for (int i = 0; i < 3; ++i) {
    CHECK(d(i, i) == 0.0);
    for (int j = 0; j < 3; ++j) CHECK(d(i, j) == d(j, i));
  }
  CHECK_THROWS_AS(distance_matrix(s, 4), DimensionError);
  CHECK_THROWS_AS(embed(s, 0), RangeError);
}

TEST_CASE("sliding windows and prefix") {
  const TimeSeries s = TimeSeries::LinSpaced(4000, 0, 3999);
  const auto w = sliding_windows(s, 150, 10);
  CHECK(w.size() == 386);
  CHECK(w.front()[0] == 0);
  CHECK(w.back()[0] == 3850);
  CHECK(w.back()[149] == 3999);
  CHECK(sliding_windows(s, 4000, 10).size() == 1);
  CHECK_THROWS_AS(sliding_windows(s, 4001, 10), DimensionError);
  CHECK(prefix(s, 150).size() == 150);
  CHECK_THROWS_AS(prefix(s, 4001), DimensionError);
}

TEST_CASE("grayscale and downsample") {
  GrayImage r(1, 2), g(1, 2), b(1, 2);
  r << 10, 90;
  g << 20, 90;
  b << 30, 90;
  const std::vector<GrayImage> ch{r, g, b};
  const auto gray = grayscale(ch);
  CHECK(gray(0, 0) == 20);
  CHECK(gray(0, 1) == 90);
  CHECK_THROWS_AS(grayscale(std::span<const GrayImage>(ch.data(), 2)), DimensionError);

  GrayImage x(4, 4);
  for (int i = 0; i < 16; ++i) x.data()[i] = i;
  const auto half = downsample(x, 2, 2);
  CHECK(half(0, 0) == doctest::Approx((0 + 1 + 4 + 5) / 4.0));
  CHECK(half(1, 1) == doctest::Approx((10 + 11 + 14 + 15) / 4.0));
  CHECK(downsample(x, 4, 4) == x);
  const auto odd = downsample(x, 3, 3);
  CHECK(odd.rows() == 3);
  CHECK(odd(0, 0) == 0);
  CHECK(odd(2, 2) == doctest::Approx((10 + 11 + 14 + 15) / 4.0));
  CHECK_THROWS_AS(downsample(x, 5, 4), DimensionError);
}

TEST_CASE("descriptive statistics") {
  const std::vector<double> v{1, 2, 3};
  CHECK(mean(v) == 2);
  CHECK(population_std(v) == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(sample_variance(v) == 1);
  CHECK(coefficient_of_variation(v) == doctest::Approx(0.408248).epsilon(1e-6));
  const std::vector<double> same(5, 0.1);
  CHECK(population_std(same) == 0.0);
  CHECK(coefficient_of_variation(same) == 0.0);
  CHECK_THROWS_AS(coefficient_of_variation(std::vector<double>{-1, 1}), RangeError);
  CHECK_THROWS_AS(coefficient_of_variation(std::vector<double>{1}), DimensionError);

  std::vector<double> h(101);
  for (int i = 0; i <= 100; ++i) h[static_cast<std::size_t>(i)] = i;
  const auto s = group_summary(h);
  CHECK(s.q1 == 25);
  CHECK(s.median == 50);
  CHECK(s.q3 == 75);
  CHECK(s.iqr() == 50);
  CHECK(s.min == 0);
  CHECK(s.max == 100);
  CHECK(quantile(std::vector<double>{1, 2, 3, 4}, 0.5) == 2.5);
}

TEST_CASE("hedges g") {
  const std::vector<double> a{1, 2, 3, 4}, b{3, 4, 5, 6};
  const auto e = hedges_g(a, b);
  const double j = 1.0 - 3.0 / (4.0 * 8 - 9.0);
  CHECK(e.g == doctest::Approx(j * (-2.0) / std::sqrt(5.0 / 3.0)));
  CHECK(e.n1 == 4);
  CHECK(hedges_g(a, a).g == 0.0);
  CHECK(hedges_g(b, a).g == doctest::Approx(-e.g));
  CHECK_THROWS_AS(hedges_g(std::vector<double>{1, 1}, std::vector<double>{1, 1}), RangeError);
}

TEST_CASE("ranks and correlation") {
  const std::vector<double> x{10, 20, 20, 30};
  const auto r = ranks(x);
  CHECK(r == std::vector<double>{1, 2.5, 2.5, 4});
  const std::vector<double> y{1, 4, 9, 16};
  CHECK(spearman(std::vector<double>{1, 2, 3, 4}, y) == doctest::Approx(1.0));
  CHECK(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{3, 2, 1}) == doctest::Approx(-1.0));
}

TEST_CASE("iqr disjointness") {
  GroupSummary a, b;
  a.q1 = 0;
  a.q3 = 1;
  b.q1 = 1.5;
  b.q3 = 2;
  CHECK(iqr_disjoint(a, b));
  b.q1 = 1;
  CHECK_FALSE(iqr_disjoint(a, b));
}
