#include "slope/gauss.hpp"

#include <cmath>

#include "slope/errors.hpp"

namespace slope {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kSqrt2Pi = 2.5066282746310005024;

// Rational approximation for the inverse normal CDF (Acklam's coefficients,
// relative error below 1.2e-9). Used only as the starting point for the
// Halley refinement below.
double quantile_guess(double u) {
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double u_low = 0.02425;

  if (u < u_low) {
    const double q = std::sqrt(-2.0 * std::log(u));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = u - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Two Halley iterations on f(x) = Phi(x) - u. Each step roughly cubes the
// accuracy, so the rational guess lands well below 1e-12.
double refine(double x, double u) {
  for (int step = 0; step < 2; ++step) {
    const double err = normal_cdf(x) - u;
    const double t = err * kSqrt2Pi * std::exp(0.5 * x * x);
    x -= t / (1.0 + 0.5 * x * t);
  }
  return x;
}

}  // namespace

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("normal_quantile: argument must lie in (0,1)");
  }
  if (u == 0.5) return 0.0;
  // Evaluate on the lower half and mirror, so that quantile(1-u) is exactly
  // -quantile(u).
  if (u > 0.5) return -normal_quantile(1.0 - u);
  return refine(quantile_guess(u), u);
}

}  // namespace slope
