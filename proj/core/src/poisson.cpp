#include "coupon/poisson.hpp"

#include <cmath>

#include "coupon/errors.hpp"
#include "coupon/special.hpp"

namespace coupon {

LatticePMF poisson_law(double lambda, double eps) {
    if (lambda < 0) throw precondition_error("poisson_law: lambda must be >= 0");
    const auto [lo, hi] = poisson_support(lambda, eps);
    const auto w = poisson_pmf_range(lambda, lo, hi);
    LatticePMF out;
    out.offset = lo;
    out.weights.assign(w.begin(), w.end());
    long double s = 0;
    for (auto x : w) s += x;
    out.tail_deficit = static_cast<double>(std::max<long double>(0, 1 - s));
    return out;
}

double corrected_poisson_pmf(const MomentSummary& s, std::int64_t k) {
    if (k < 0) return 0.0;
    const double l = s.lambda_n, l2 = s.lambda(2);
    const double po_k = poisson_pmf(l, k);
    if (k < 2) return po_k * (1 - l2 / 2);
    const double po_km2 = poisson_pmf(l, k - 2);
    return po_k + (po_km2 - po_k) * l2 / 2;
}

double corrected_poisson_pmf(const CollectorParams& p, std::int64_t k) {
    validate(p);
    if (p.n - p.m < 2) {
        // lambda_n = 0: W~ = 0 almost surely
        return k == 0 ? 1.0 : 0.0;
    }
    return corrected_poisson_pmf(moments(p, 2), k);
}

CompoundPoissonDist cp_parameters(const MomentSummary& s) {
    const double d = s.sigma2_n - s.mu_n;
    const double fl = std::floor(d);
    const double frac = d - fl;
    CompoundPoissonDist out;
    out.mu = s.sigma2_n - 2 * frac;
    out.a = frac;
    out.c = static_cast<std::int64_t>(fl);
    if (!(out.mu > 0)) throw precondition_error("cp_parameters: sigma^2 - 2<sigma^2 - mu> is not positive");
    return out;
}

CompoundPoissonDist cp_parameters(const CollectorParams& p) { return cp_parameters(moments(p, 2)); }

LatticePMF compound_poisson_pmf(double mu, double a, std::int64_t k_max) {
    if (!(mu > 0) || a < 0) throw precondition_error("compound_poisson_pmf: need mu > 0 and a >= 0");
    if (k_max < 0) throw precondition_error("compound_poisson_pmf: k_max must be >= 0");
    // Run the recursion on a log-scaled copy so that large means do not
    // underflow pi_0 = exp(-mu - a/2).
    const auto n = static_cast<std::size_t>(k_max) + 1;
    std::vector<long double> v(n, 0.0L);
    const long double lmu = mu, la = a;
    long double log_scale = -(lmu + la / 2);
    v[0] = 1.0L;
    for (std::size_t k = 1; k < n; ++k) {
        long double x = lmu * v[k - 1];
        if (k >= 2) x += la * v[k - 2];
        v[k] = x / static_cast<long double>(k);
        if (v[k] > 1e300L) {
            for (std::size_t j = 0; j <= k; ++j) v[j] *= 1e-300L;
            log_scale += 300 * std::log(10.0L);
        }
    }
    LatticePMF out;
    out.weights.resize(n);
    long double s = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const long double w = v[k] == 0 ? 0.0L : std::exp(std::log(v[k]) + log_scale);
        out.weights[k] = static_cast<double>(w);
        s += w;
    }
    out.tail_deficit = static_cast<double>(std::max<long double>(0, 1 - s));
    return out;
}

LatticePMF compound_poisson_pmf_direct(double mu, double a, std::int64_t k_max) {
    if (!(mu > 0) || a < 0) throw precondition_error("compound_poisson_pmf: need mu > 0 and a >= 0");
    const auto z1 = poisson_pmf_range(mu, 0, k_max);
    const auto z2 = poisson_pmf_range(a / 2, 0, k_max / 2);
    LatticePMF out;
    out.weights.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
    long double s = 0;
    for (std::int64_t k = 0; k <= k_max; ++k) {
        long double acc = 0;
        for (std::int64_t j = 0; 2 * j <= k; ++j) acc += z1[static_cast<std::size_t>(k - 2 * j)] * z2[static_cast<std::size_t>(j)];
        out.weights[static_cast<std::size_t>(k)] = static_cast<double>(acc);
        s += acc;
    }
    out.tail_deficit = static_cast<double>(std::max<long double>(0, 1 - s));
    return out;
}

std::int64_t compound_poisson_extent(double mu, double a, double eps) {
    // Z1 + 2 Z2 <= k whenever Z1 <= k1 and Z2 <= k2 with k1 + 2 k2 <= k
    const auto h1 = poisson_support(mu, eps / 2).second;
    const auto h2 = poisson_support(a / 2, eps / 2).second;
    return h1 + 2 * h2;
}

} // namespace coupon
