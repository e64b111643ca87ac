#include "coupon/gumbel.hpp"

#include <cmath>
#include <memory>

#include <boost/math/special_functions/gamma.hpp>

#include "coupon/errors.hpp"
#include "coupon/special.hpp"

namespace coupon {

namespace {

double harmonic(int n) {
    long double s = 0;
    for (int k = n; k >= 1; --k) s += 1.0L / k;
    return static_cast<double>(s);
}

} // namespace

GumbelLike::GumbelLike(int m_) : m(m_), C_m(euler_gamma - harmonic(m_)) {
    if (m_ < 0) throw precondition_error("GumbelLike: m must be >= 0");
}

double GumbelLike::e(double x) const { return std::exp(-(x + C_m)); }

double GumbelLike::cdf(double x) const {
    const double E = e(x);
    if (!std::isfinite(E) || E > 1e300) return 0.0;
    if (E == 0.0) return 1.0;
    return boost::math::gamma_q(static_cast<double>(m) + 1.0, E);
}

double GumbelLike::pdf(double x) const {
    const double E = e(x);
    if (E == 0.0 || !std::isfinite(E)) return 0.0;
    return std::exp(-E + (m + 1) * std::log(E) - std::lgamma(m + 1.0));
}

double GumbelLike::pdf_d1(double x) const {
    const double E = e(x);
    return pdf(x) * (E - (m + 1));
}

double GumbelLike::pdf_d2(double x) const {
    const double E = e(x);
    const double f = pdf(x);
    if (f == 0.0) return 0.0;
    return f * (E * E - (2.0 * m + 3.0) * E + (m + 1.0) * (m + 1.0));
}

double GumbelLike::pdf_max() const {
    return std::exp(-(m + 1.0) + (m + 1.0) * std::log(m + 1.0) - std::lgamma(m + 1.0));
}

double gumbel_cdf(int m, double x) { return GumbelLike(m).cdf(x); }
double gumbel_pdf(int m, double x) { return GumbelLike(m).pdf(x); }
double gumbel_pdf_second_derivative(int m, double x) { return GumbelLike(m).pdf_d2(x); }

CorrectionG::CorrectionG(const CollectorParams& p, double quad_tol) : p_(p), tol_(quad_tol), g_(p.m) {
    validate(p);
    if (p.n < p.m + 2) throw precondition_error("correction_G: requires n >= m+2");
    if (!(quad_tol >= 1e-14 && quad_tol <= 1e-6))
        throw precondition_error("correction_G: quad_tol must lie in [1e-14, 1e-6]");
    long double h = 0;
    for (int k = p.n - 1; k >= p.m + 1; --k) h += 1.0L / k;
    H_ = static_cast<double>(h);
}

std::vector<double> CorrectionG::T(double x) const {
    const int m = p_.m, n = p_.n;
    std::vector<double> out(static_cast<std::size_t>(n - 1 - m), 0.0);
    const double E = g_.e(x);
    const double f = g_.pdf(x);
    // far left: f underflows; far right: every T_k is below f/E^0 ~ 1e-150
    if (f == 0.0 || E < 1e-150) return out;
    // s = j - k for j in {m+1, m+2, m+3}, k in [m+1, n-1]
    const int s_lo = m + 2 - n, s_hi = 2;
    const auto psi = scaled_upper_gamma(s_lo, s_hi, E, tol_);
    auto ps = [&](int s) { return psi[static_cast<std::size_t>(s - s_lo)]; };
    const double c2 = 2.0 * m + 3.0, c3 = (m + 1.0) * (m + 1.0);
    for (int k = m + 1; k <= n - 1; ++k) {
        const double bracket = E * E * ps(m + 3 - k) - c2 * E * ps(m + 2 - k) + c3 * ps(m + 1 - k);
        out[static_cast<std::size_t>(k - m - 1)] = f * bracket;
    }
    return out;
}

double CorrectionG::value(double x) const {
    const auto t = T(x);
    long double s = 0;
    for (std::size_t i = t.size(); i-- > 0;) s += t[i] / static_cast<long double>(p_.m + 1 + static_cast<int>(i));
    const long double v = -(static_cast<long double>(H_) * g_.pdf_d1(x) - s) / (2.0L * p_.n);
    return static_cast<double>(v);
}

double CorrectionG::derivative(double x) const {
    const auto t = T(x);
    long double s = 0;
    for (std::size_t i = t.size(); i-- > 0;) s += t[i];
    return static_cast<double>(-s / (2.0L * p_.n));
}

std::vector<double> CorrectionG::convolutions(double x) const {
    auto t = T(x);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] *= static_cast<double>(p_.m + 1 + static_cast<int>(i));
    return t;
}

double correction_G(const CollectorParams& p, double x, double quad_tol) {
    return CorrectionG(p, quad_tol).value(x);
}

double correction_G_prime(const CollectorParams& p, double x, double quad_tol) {
    return CorrectionG(p, quad_tol).derivative(x);
}

double star_shift(int n) {
    if (n < 1) throw precondition_error("star_shift: n must be >= 1");
    return harmonic(n) - std::log(static_cast<double>(n)) - euler_gamma;
}

double star_shift(const CollectorParams& p) { return star_shift(p.n); }

double lattice_atom(const CollectorParams& p, long long w) {
    long double h = 0;
    for (int k = p.n; k >= p.m + 1; --k) h += 1.0L / k;
    return static_cast<double>(static_cast<long double>(w) / p.n - h);
}

ContinuousCDF gumbel_target(int m) {
    GumbelLike g(m);
    return {"gumbel(m=" + std::to_string(m) + ")", [g](double x) { return g.cdf(x); }};
}

ContinuousCDF gumbel_corrected_target(const CollectorParams& p, double quad_tol) {
    auto G = std::make_shared<const CorrectionG>(p, quad_tol);
    GumbelLike g(p.m);
    return {"gumbel+G(m=" + std::to_string(p.m) + ")", [G, g](double x) { return g.cdf(x) + G->value(x); }};
}

} // namespace coupon
