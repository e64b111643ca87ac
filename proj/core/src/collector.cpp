#include "coupon/collector.hpp"

#include <algorithm>
#include <cmath>

#include "coupon/collector_exact.hpp"
#include "coupon/errors.hpp"

namespace coupon {

double MomentSummary::sigma_n() const { return std::sqrt(sigma2_n); }

MomentSummary moments(const CollectorParams& p, int J) {
    validate(p);
    if (J < 2) throw precondition_error("moments: J must be >= 2");
    const int n = p.n, m = p.m;
    MomentSummary s;
    s.lambda_nj.assign(static_cast<std::size_t>(J) + 1, 0.0);
    s.a_nj.assign(static_cast<std::size_t>(J) + 1, 0.0);
    std::vector<long double> lam(s.lambda_nj.size(), 0), a(s.a_nj.size(), 0);
    long double mu = 0, var = 0;
    // small terms first
    for (int k = n; k >= m + 1; --k) {
        const long double kk = k;
        mu += n / kk;
        var += static_cast<long double>(n) * (n - k) / (kk * kk);
        const long double q = static_cast<long double>(n - k) / n;  // 1 - k/n
        const long double u = static_cast<long double>(n - k) / kk;
        long double qj = 1, uj = 1;
        for (int j = 0; j <= J; ++j) {
            lam[static_cast<std::size_t>(j)] += qj;
            a[static_cast<std::size_t>(j)] += uj;
            qj *= q;
            uj *= u;
        }
    }
    for (std::size_t j = 0; j < lam.size(); ++j) {
        s.lambda_nj[j] = static_cast<double>(lam[j]);
        s.a_nj[j] = static_cast<double>(a[j]);
    }
    s.mu_n = static_cast<double>(mu);
    s.sigma2_n = static_cast<double>(var);
    const double d = n - m;
    s.lambda_n = d * (d - 1) / (2.0 * n);
    s.lambda_prime_n = s.a_nj[1];
    return s;
}

namespace {

// Smallest L with P(W >= L) <= eps, from Janson's tail bound for sums of
// geometrics: P(W >= x mu) <= exp(-p_min mu (x - 1 - log x)).
std::int64_t janson_length(const CollectorParams& p, double mu, double eps) {
    const double pmin = static_cast<double>(p.m + 1) / p.n;
    const double need = std::log(1.0 / eps) / (pmin * mu);
    double lo = 1.0, hi = 2.0;
    while (hi - 1.0 - std::log(hi) < need) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mid - 1.0 - std::log(mid) < need ? lo : hi) = mid;
    }
    return static_cast<std::int64_t>(std::ceil(hi * mu)) + 1;
}

} // namespace

LatticePMF exact_pmf_convolution(const CollectorParams& p, double tail_eps) {
    validate(p);
    if (!(tail_eps > 0.0 && tail_eps <= 1e-6))
        throw precondition_error("exact_pmf_convolution: tail_eps must lie in (0, 1e-6]");
    const std::int64_t base = p.n - p.m;
    if (p.m == p.n - 1) return LatticePMF::point_mass(1);

    const auto [mu, var] = mean_variance<double>(p);
    (void)var;
    // half of the budget for the hard cut, half for trimming afterwards
    const std::int64_t cut = janson_length(p, mu, tail_eps / 2) - base;
    auto w = shifted_pmf_prefix<double>(p, static_cast<std::size_t>(std::max<std::int64_t>(cut, 1)));

    long double kept = 0;
    for (double x : w) kept += x;
    long double deficit = std::max<long double>(0, 1 - kept);
    // trim the right tail while the budget allows
    while (w.size() > 1 && deficit + w.back() <= tail_eps) {
        deficit += w.back();
        w.pop_back();
    }
    if (deficit > tail_eps)
        throw numerical_error("exact_pmf_convolution: tail mass exceeds tail_eps");
    LatticePMF out;
    out.offset = base;
    out.weights = std::move(w);
    out.tail_deficit = static_cast<double>(deficit);
    return out;
}

LatticePMF exact_pmf_markov(const CollectorParams& p, int t_max) {
    validate(p);
    if (t_max < p.n - p.m) throw precondition_error("exact_pmf_markov: t_max must be >= n-m");
    auto all = markov_pmf<double>(p, t_max);
    LatticePMF out;
    out.offset = p.n - p.m;
    out.weights.assign(all.begin() + out.offset, all.end());
    long double s = 0;
    for (double x : out.weights) s += x;
    out.tail_deficit = static_cast<double>(std::max<long double>(0, 1 - s));
    return out;
}

Rational cdf_inclusion_exclusion_exact(const CollectorParams& p, int t) {
    validate(p);
    if (p.n > 30) throw precondition_error("cdf_inclusion_exclusion: n must be <= 30");
    if (t < 1 || t > 200) throw precondition_error("cdf_inclusion_exclusion: t must lie in [1, 200]");
    const int n = p.n;
    std::vector<std::vector<BigInt>> binom(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        binom[i].assign(static_cast<std::size_t>(i) + 1, BigInt(1));
        for (int j = 1; j < i; ++j) binom[i][j] = binom[i - 1][j - 1] + binom[i - 1][j];
    }
    std::vector<BigInt> powt(static_cast<std::size_t>(n) + 1);
    for (int b = 0; b <= n; ++b) powt[b] = boost::multiprecision::pow(BigInt(b), static_cast<unsigned>(t));
    BigInt count = 0;
    for (int d = n - p.m; d <= std::min(n, t); ++d) {
        BigInt surj = 0;
        for (int j = 0; j <= d; ++j) {
            BigInt term = binom[d][j] * powt[d - j];
            if (j % 2) surj -= term;
            else surj += term;
        }
        count += binom[n][d] * surj;
    }
    return Rational(count, powt[n]);
}

double cdf_inclusion_exclusion(const CollectorParams& p, int t) {
    return static_cast<double>(cdf_inclusion_exclusion_exact(p, t));
}

double shifted_pmf_bruteforce(const CollectorParams& p, int k) {
    validate(p);
    if (k < 0) throw precondition_error("shifted_pmf_bruteforce: k must be >= 0");
    const int parts = p.n - p.m - 1;
    if (parts > 0) {
        // C(k + parts - 1, k) compositions
        const double size = std::exp(std::lgamma(k + parts) - std::lgamma(k + 1.0) - std::lgamma(parts));
        if (size > 1e6 * (1 + 1e-9))
            throw precondition_error("shifted_pmf_bruteforce: more than 1e6 compositions to enumerate");
    }
    return shifted_pmf_compositions<double>(p, k);
}

LatticePMF shifted_law(const LatticePMF& w, const CollectorParams& p) {
    return w.shifted(-static_cast<std::int64_t>(p.n - p.m));
}

std::string_view to_string(Regime r) {
    switch (r) {
    case Regime::small: return "small";
    case Regime::medium: return "medium";
    case Regime::large: return "large";
    case Regime::very_large: return "very_large";
    }
    return "?";
}

Regime classify_regime(const CollectorParams& p, const MomentSummary& s) {
    const double ratio = static_cast<double>(p.m) / p.n;
    if (ratio <= 0.1) return Regime::small;
    if (ratio < 0.9) return Regime::medium;
    return std::floor(s.a(2)) >= 1.0 ? Regime::large : Regime::very_large;
}

Regime classify_regime(const CollectorParams& p) { return classify_regime(p, moments(p, 2)); }

} // namespace coupon
