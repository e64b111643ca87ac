#pragma once

#include <cstdint>
#include <vector>

namespace coupon {

double normal_cdf(double x);

// Po(lambda){k}; lambda = 0 gives the point mass at 0.
double poisson_pmf(double lambda, std::int64_t k);

// Po(lambda){k} for k = lo..hi, filled outward from the mode by the ratio
// recurrence (one special-function call per range).
std::vector<long double> poisson_pmf_range(double lambda, std::int64_t lo, std::int64_t hi);

// Index range [lo, hi] outside which Po(lambda) has mass below eps on each side.
std::pair<std::int64_t, std::int64_t> poisson_support(double lambda, double eps);

// psi_s(x) = x^{-s} e^{x} Gamma(s, x) = int_0^inf (1+t)^{s-1} e^{-xt} dt, for
// all integers s in [s_lo, s_hi], x > 0. Element i corresponds to s = s_lo + i.
// tol is the relative tolerance of the continued fraction used at the pivot.
std::vector<double> scaled_upper_gamma(int s_lo, int s_hi, double x, double tol = 1e-15);

} // namespace coupon
