#include "coupon/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>

#include "coupon/errors.hpp"

namespace coupon {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double poisson_pmf(double lambda, std::int64_t k) {
    if (lambda < 0) throw precondition_error("poisson_pmf: lambda must be >= 0");
    if (k < 0) return 0.0;
    if (lambda == 0) return k == 0 ? 1.0 : 0.0;
    // e^{-l} l^k / k! = d/dl P(k+1, l); boost evaluates it through the Lanczos
    // prefix in log space, which keeps full relative accuracy at large k.
    return boost::math::gamma_p_derivative(static_cast<double>(k) + 1.0, lambda);
}

std::vector<long double> poisson_pmf_range(double lambda, std::int64_t lo, std::int64_t hi) {
    std::vector<long double> out;
    if (hi < lo) return out;
    out.assign(static_cast<std::size_t>(hi - lo + 1), 0.0L);
    if (lambda == 0) {
        if (lo <= 0 && 0 <= hi) out[static_cast<std::size_t>(-lo)] = 1.0L;
        return out;
    }
    if (hi < 0) return out;
    const long double lam = lambda;
    const std::int64_t mode =
        std::clamp(static_cast<std::int64_t>(std::floor(lambda)), std::max<std::int64_t>(lo, 0), hi);
    const long double pm = poisson_pmf(lambda, mode);
    auto idx = [&](std::int64_t k) { return static_cast<std::size_t>(k - lo); };
    out[idx(mode)] = pm;
    long double v = pm;
    for (std::int64_t k = mode + 1; k <= hi; ++k) {
        v *= lam / static_cast<long double>(k);
        out[idx(k)] = v;
    }
    v = pm;
    for (std::int64_t k = mode - 1; k >= std::max<std::int64_t>(lo, 0); --k) {
        v *= static_cast<long double>(k + 1) / lam;
        out[idx(k)] = v;
    }
    return out;
}

std::pair<std::int64_t, std::int64_t> poisson_support(double lambda, double eps) {
    if (lambda == 0) return {0, 0};
    // Chernoff: P(X >= k) <= exp(-lambda h(k/lambda)), h(t) = t log t - t + 1,
    // same bound for P(X <= k) with k < lambda. Bisect on the rate.
    const double target = -std::log(eps);
    auto rate = [lambda](double k) {
        const double t = k / lambda;
        return lambda * (t > 0 ? t * std::log(t) - t + 1 : 1.0);
    };
    double a = lambda, b = lambda + 10 * std::sqrt(lambda) + 10;
    while (rate(b) < target) b = lambda + 2 * (b - lambda);
    for (int i = 0; i < 100 && b - a > 0.5; ++i) {
        const double c = 0.5 * (a + b);
        (rate(c) < target ? a : b) = c;
    }
    const auto hi = static_cast<std::int64_t>(std::ceil(b));
    std::int64_t lo = 0;
    if (rate(0) >= target) {
        a = 0;
        b = lambda;
        for (int i = 0; i < 100 && b - a > 0.5; ++i) {
            const double c = 0.5 * (a + b);
            (rate(c) >= target ? a : b) = c;
        }
        lo = static_cast<std::int64_t>(std::floor(a));
    }
    return {lo, hi};
}

namespace {

// psi_a(x) from Legendre's continued fraction for Gamma(a, x), modified Lentz.
double psi_continued_fraction(double a, double x, double tol) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= tol) return h;
    }
    throw numerical_error("scaled_upper_gamma: continued fraction did not converge");
}

} // namespace

std::vector<double> scaled_upper_gamma(int s_lo, int s_hi, double x, double tol) {
    if (!(x > 0)) throw precondition_error("scaled_upper_gamma: x must be > 0");
    if (s_hi < s_lo) return {};
    tol = std::max(tol, std::numeric_limits<double>::epsilon());
    // Upward recursion x psi_{s+1} = s psi_s + 1 is stable for |s| < x, downward
    // for |s| > x; start at s* = -floor(x) and go both ways.
    int pivot;
    double psi_pivot;
    if (x < 1.0) {
        pivot = 0;
        psi_pivot = -std::exp(x) * std::expint(-x);  // e^x E_1(x)
    } else {
        pivot = -static_cast<int>(std::floor(x));
        psi_pivot = psi_continued_fraction(pivot, x, tol);
    }
    const int lo = std::min(s_lo, pivot), hi = std::max(s_hi, pivot);
    std::vector<double> all(static_cast<std::size_t>(hi - lo + 1));
    auto at = [&](int s) -> double& { return all[static_cast<std::size_t>(s - lo)]; };
    at(pivot) = psi_pivot;
    for (int s = pivot; s < hi; ++s) at(s + 1) = (s * at(s) + 1.0) / x;
    for (int s = pivot; s > lo; --s) at(s - 1) = (x * at(s) - 1.0) / (s - 1);
    return {all.begin() + (s_lo - lo), all.begin() + (s_hi - lo) + 1};
}

} // namespace coupon
