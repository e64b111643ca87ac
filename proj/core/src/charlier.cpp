#include "coupon/charlier.hpp"

#include <algorithm>
#include <cmath>

#include "coupon/errors.hpp"
#include "coupon/special.hpp"

namespace coupon {

double charlier_polynomial(int r, std::int64_t j, double lambda, CharlierForm form) {
    if (!(lambda > 0)) throw precondition_error("charlier_polynomial: lambda must be > 0");
    if (r < 0) throw precondition_error("charlier_polynomial: r must be >= 0");
    if (form == CharlierForm::classical) {
        // lambda C_{r+1} = (r + lambda - j) C_r - r C_{r-1}
        long double prev = 1, cur = 1 - static_cast<long double>(j) / lambda;
        if (r == 0) return 1.0;
        for (int k = 1; k < r; ++k) {
            const long double nxt = ((k + static_cast<long double>(lambda) - j) * cur - k * prev) / lambda;
            prev = cur;
            cur = nxt;
        }
        return static_cast<double>(cur);
    }
    // sum_k C(r,k) C(j,k) k! lambda^{-2k}; term ratio (r-k)(j-k)/((k+1) lambda^2)
    const long double z = 1.0L / (static_cast<long double>(lambda) * lambda);
    long double term = 1, sum = 1;
    for (int k = 0; k < r && k < j; ++k) {
        term *= static_cast<long double>(r - k) * static_cast<long double>(j - k) / (k + 1) * z;
        sum += term;
    }
    return static_cast<double>(sum);
}

std::string_view to_string(PCRegime r) { return r == PCRegime::a2_large ? "a2_large" : "a2_small"; }

int pc_truncation_power(int R, PCRegime regime) { return regime == PCRegime::a2_large ? R : 3 * R - 2; }

int pc_nominal_degree(int R, PCRegime regime) { return regime == PCRegime::a2_large ? R * R : 3 * R * R - R; }

std::vector<double> h_R_coefficients(const MomentSummary& s, int R, PCRegime regime) {
    if (R < 3) throw precondition_error("h_R_coefficients: R must be >= 3");
    if (static_cast<int>(s.a_nj.size()) <= R) throw precondition_error("h_R_coefficients: moments computed with J < R");
    std::vector<double> h(static_cast<std::size_t>(R) + 1, 0.0);
    const double a2 = s.a(2);
    if (regime == PCRegime::a2_large) {
        const double fl = std::floor(a2), frac = a2 - fl;
        h[1] = -frac;
        h[2] = frac / 2;
        for (int r = 3; r <= R; ++r) h[r] = (s.a(r) + ((r + 1) % 2 == 0 ? fl : -fl)) / r;
    } else {
        h[1] = -a2;
        h[2] = a2 / 2;
        for (int r = 3; r <= R; ++r) h[r] = s.a(r) / r;
    }
    return h;
}

SignedLatticeMeasure pc_difference_form(double lambda, const std::vector<double>& coeffs, std::int64_t lo,
                                        std::int64_t hi) {
    if (!(lambda > 0)) throw precondition_error("pc_difference_form: lambda must be > 0");
    const auto D = static_cast<std::int64_t>(coeffs.size()) - 1;
    // Delta^r at j needs Po on [j-r, j]; entries left of ext_lo are zero only if ext_lo = 0
    const std::int64_t ext_lo = std::max<std::int64_t>(0, lo - D);
    const auto po = poisson_pmf_range(lambda, ext_lo, hi);
    std::vector<long double> acc(po.size());
    for (std::size_t i = 0; i < po.size(); ++i) acc[i] = static_cast<long double>(coeffs[static_cast<std::size_t>(D)]) * po[i];
    for (std::int64_t r = D - 1; r >= 0; --r) {
        // acc <- Delta acc + a~_r Po, in place from the right
        for (std::size_t i = acc.size(); i-- > 0;) {
            const long double left = i > 0 ? acc[i - 1] : 0.0L;
            acc[i] = left - acc[i] + static_cast<long double>(coeffs[static_cast<std::size_t>(r)]) * po[i];
        }
    }
    SignedLatticeMeasure out;
    const std::int64_t from = std::max<std::int64_t>(lo, 0);
    out.offset = from;
    for (std::int64_t j = from; j <= hi; ++j) out.weights.push_back(static_cast<double>(acc[static_cast<std::size_t>(j - ext_lo)]));
    return out;
}

SignedLatticeMeasure pc_charlier_form(double lambda, const std::vector<double>& coeffs, std::int64_t lo,
                                      std::int64_t hi, CharlierForm form, CharlierSign sign) {
    if (!(lambda > 0)) throw precondition_error("pc_charlier_form: lambda must be > 0");
    const std::int64_t from = std::max<std::int64_t>(lo, 0);
    const auto po = poisson_pmf_range(lambda, from, hi);
    const int D = static_cast<int>(coeffs.size()) - 1;
    SignedLatticeMeasure out;
    out.offset = from;
    for (std::int64_t j = from; j <= hi; ++j) {
        long double factor = sign == CharlierSign::alternating ? coeffs[0] : 1.0L;
        for (int r = 1; r <= D; ++r) {
            const long double C = charlier_polynomial(r, j, lambda, form);
            const bool odd = r % 2 != 0;
            const long double sgn = sign == CharlierSign::alternating ? (odd ? -1.0L : 1.0L) : (odd ? 1.0L : -1.0L);
            factor += sgn * coeffs[static_cast<std::size_t>(r)] * C;
        }
        out.weights.push_back(static_cast<double>(po[static_cast<std::size_t>(j - from)] * factor));
    }
    return out;
}

PoissonCharlierResult build_poisson_charlier(const CollectorParams& p, int R, int support_hint) {
    validate(p);
    if (R < 3) throw precondition_error("build_poisson_charlier: R must be >= 3");
    if (support_hint < 1) throw precondition_error("build_poisson_charlier: support_hint must be >= 1");
    const auto s = moments(p, R);
    if (!(s.sigma2_n > 0)) throw precondition_error("build_poisson_charlier: requires sigma_n^2 > 0");
    const double a2 = s.a(2);
    if (std::fabs(a2 - 1.0) < 1e-6)
        throw precondition_error("build_poisson_charlier: a_{n,2} is within 1e-6 of 1 (regime boundary)");
    PoissonCharlierResult res;
    auto& M = res.measure;
    M.lambda = s.sigma2_n;
    M.R = R;
    M.regime = a2 > 1 ? PCRegime::a2_large : PCRegime::a2_small;
    M.c = M.regime == PCRegime::a2_large ? static_cast<std::int64_t>(std::floor(a2)) : 0;

    const auto h = h_R_coefficients(s, R, M.regime);
    std::vector<long double> hl(h.begin(), h.end());
    const auto H = exp_truncated(hl, pc_truncation_power(R, M.regime));
    const std::size_t D = std::max<std::size_t>(H.size() - 1, static_cast<std::size_t>(pc_nominal_degree(R, M.regime)));
    M.coeffs.assign(D + 1, 0.0);
    for (std::size_t i = 0; i < H.size(); ++i) M.coeffs[i] = static_cast<double>(H[i]);

    const double sd = std::sqrt(M.lambda);
    const auto lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(M.lambda - support_hint * sd)));
    const auto hi = static_cast<std::int64_t>(std::ceil(M.lambda + support_hint * sd)) + static_cast<std::int64_t>(D) + support_hint;
    // Same measure as the difference construction, but Delta^r Po is taken as
    // (-1)^r C_r(j) Po{j} via the recurrence: repeated differencing cancels
    // catastrophically once the degree passes ~10.
    res.nu = pc_charlier_form(M.lambda, M.coeffs, lo, hi, CharlierForm::classical, CharlierSign::alternating);
    const double mass = res.nu.total_mass();
    if (std::fabs(mass - 1.0) > 1e-10)
        throw numerical_error("build_poisson_charlier: total mass " + std::to_string(mass) + " differs from 1");
    return res;
}

} // namespace coupon
