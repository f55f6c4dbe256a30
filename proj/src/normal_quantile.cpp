#include <graden/gradient_entropy.hpp>

#include <cmath>
#include <numbers>
#include <string>

namespace graden {

namespace {

// Acklam's rational approximation (relative error ~1e-9), polished by one
// Halley step against the exact CDF via erfc.
double acklam(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw RangeError("normal_quantile: probability must lie in (0, 1), got " + std::to_string(p));
  }
  // Near 1 the CDF cannot resolve p; 1 - p is exact there.
  if (p > 0.9) return -normal_quantile(1.0 - p);
  double x = acklam(p);
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

Thresholds quantile_thresholds(double a, double b) {
  if (!(a > 0.5 && a < 0.75)) {
    throw RangeError("quantile level a must lie in (0.5, 0.75), got " + std::to_string(a));
  }
  if (!(b > 0.75 && b < 1.0)) {
    throw RangeError("quantile level b must lie in (0.75, 1), got " + std::to_string(b));
  }
  Thresholds t;
  t.delta = normal_quantile(a);
  t.gamma = normal_quantile(b);
  t.quantile_a = a;
  t.quantile_b = b;
  return t;
}

Thresholds raw_thresholds(double delta, double gamma) {
  if (!std::isfinite(delta) || !std::isfinite(gamma) || delta < 0.0 || !(gamma > delta)) {
    throw RangeError("raw thresholds need 0 <= delta < gamma, got delta=" + std::to_string(delta) +
                     " gamma=" + std::to_string(gamma));
  }
  Thresholds t;
  t.delta = delta;
  t.gamma = gamma;
  return t;
}

}  // namespace graden
