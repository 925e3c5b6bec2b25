#pragma once

namespace slope {

// Standard normal density.
double normal_pdf(double x);

// Standard normal CDF, computed through erfc. Accurate to a few ulp over
// the whole double range.
double normal_cdf(double x);

// Inverse of the standard normal CDF on (0,1).
//
// Rational initial approximation refined by two Halley steps against the
// erfc-based CDF; the result satisfies |normal_cdf(x) - u| <= 1e-12 and is
// oddly symmetric: normal_quantile(1-u) == -normal_quantile(u).
//
// Throws DomainError for u outside the open interval (0,1).
double normal_quantile(double u);

}  // namespace slope
