#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "coupon/charlier.hpp"
#include "coupon/collector.hpp"
#include "coupon/collector_exact.hpp"
#include "coupon/errors.hpp"
#include "coupon/gumbel.hpp"
#include "coupon/metrics.hpp"
#include "coupon/poisson.hpp"
#include "coupon/special.hpp"

using namespace coupon;
using boost::math::quadrature::gauss_kronrod;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
    return gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol);
}

} // namespace

// --- Gumbel-like limit ------------------------------------------------------

TEST(Gumbel, ValueAtMinusGamma) {
    EXPECT_NEAR(gumbel_cdf(0, -euler_gamma), std::exp(-1.0), 1e-15);
    for (int m : {0, 1, 3, 10}) {
        EXPECT_NEAR(gumbel_cdf(m, 60), 1.0, 1e-15);
        EXPECT_NEAR(gumbel_cdf(m, -30), 0.0, 1e-15);
    }
}

TEST(Gumbel, CdfMatchesQuadratureOfPdf) {
    for (int m : {0, 1, 2, 5})
        for (double x = -6; x <= 10; x += 0.5) {
            const double q = integrate([m](double t) { return gumbel_pdf(m, t); }, -inf, x);
            EXPECT_NEAR(gumbel_cdf(m, x), q, 1e-9) << "m=" << m << " x=" << x;
        }
}

TEST(Gumbel, PdfIntegratesToOne) {
    for (int m : {0, 1, 2, 5, 20}) {
        const double q = integrate([m](double t) { return gumbel_pdf(m, t); }, -inf, inf);
        EXPECT_NEAR(q, 1.0, 1e-10) << "m=" << m;
    }
}

TEST(Gumbel, CdfMonotone) {
    for (int m : {0, 2, 7}) {
        double prev = 0;
        for (double x = -8; x <= 20; x += 0.01) {
            const double F = gumbel_cdf(m, x);
            EXPECT_GE(F, prev);
            prev = F;
        }
    }
}

TEST(Gumbel, SecondDerivative) {
    EXPECT_NEAR(gumbel_pdf_second_derivative(0, -euler_gamma), -std::exp(-1.0), 1e-15);
    EXPECT_NEAR(gumbel_pdf_second_derivative(2, 80), 0.0, 1e-30);
    const double h = 1e-4;
    for (int m : {0, 1, 2})
        for (double x : {-1.0, 0.0, 1.0}) {
            const double fd = (gumbel_pdf(m, x + h) - 2 * gumbel_pdf(m, x) + gumbel_pdf(m, x - h)) / (h * h);
            EXPECT_NEAR(gumbel_pdf_second_derivative(m, x), fd, 1e-6) << "m=" << m << " x=" << x;
        }
}

TEST(Gumbel, SecondDerivativeIntegratesToZero) {
    for (int m : {0, 1, 4}) {
        const double q = integrate([m](double t) { return gumbel_pdf_second_derivative(m, t); }, -inf, inf);
        EXPECT_NEAR(q, 0.0, 1e-9);
    }
}

// --- correction G -----------------------------------------------------------

TEST(CorrectionG, Preconditions) {
    EXPECT_THROW(CorrectionG(make_params(5, 4)), precondition_error);
    EXPECT_THROW(CorrectionG(make_params(50, 0), 1e-3), precondition_error);
    EXPECT_THROW(CorrectionG(make_params(50, 0), 1e-16), precondition_error);
    EXPECT_NO_THROW(CorrectionG(make_params(5, 3)));
}

TEST(CorrectionG, VanishesAtBothEnds) {
    const double tol = 1e-12;
    for (auto p : {make_params(50, 0), make_params(200, 3), make_params(30, 10)}) {
        CorrectionG G(p, tol);
        EXPECT_NEAR(G.value(-12), 0.0, 10 * tol);
        EXPECT_NEAR(G.value(80), 0.0, 10 * tol);
        EXPECT_NEAR(G.derivative(-12), 0.0, 10 * tol);
        EXPECT_NEAR(G.derivative(80), 0.0, 10 * tol);
    }
}

TEST(CorrectionG, DerivativeConsistent) {
    const auto p = make_params(50, 0);
    const double h = 1e-5;
    for (double x : {-1.0, 0.0, 0.7, 3.0}) {
        const double fd = (correction_G(p, x + h) - correction_G(p, x - h)) / (2 * h);
        EXPECT_NEAR(fd, correction_G_prime(p, x), 1e-6) << "x=" << x;
    }
}

// Direct quadrature of the defining integral, no closed forms. Integrating
// [f''*h_k](u) over u <= x first leaves k * int_0^inf e^{-kt} f'(x-t) dt;
// f' is below 1e-300 once x - t < -12.
TEST(CorrectionG, MatchesDirectQuadrature) {
    for (auto p : {make_params(6, 0), make_params(7, 2)}) {
        const GumbelLike g(p.m);
        for (double x : {-1.5, 0.0, 1.2, 4.0}) {
            double total = 0;
            for (int k = p.m + 1; k <= p.n - 1; ++k)
                total += integrate([&](double t) { return std::exp(-k * t) * g.pdf_d1(x - t); }, 0, x + 12, 1e-14);
            const double oracle = -total / (2.0 * p.n);
            EXPECT_NEAR(correction_G(p, x), oracle, 1e-10) << to_string(p) << " x=" << x;
        }
    }
}

TEST(CorrectionG, ConvolutionsPositiveOnTheLeft) {
    for (auto p : {make_params(64, 0), make_params(300, 1), make_params(1000, 2)}) {
        CorrectionG G(p);
        // far left of the first local maximum of f''
        const double x = -2.5;
        for (double c : G.convolutions(x)) EXPECT_GT(c, 0.0);
        EXPECT_LT(G.derivative(x), 0.0);
    }
}

TEST(CorrectionG, ScaledDerivativeStable) {
    // sup |G'| n / log n across n = 2^7..2^12
    for (int m : {0, 2}) {
        std::vector<double> scaled;
        for (int e = 7; e <= 12; ++e) {
            const int n = 1 << e;
            CorrectionG G(make_params(n, m));
            double sup = 0;
            for (double x = -4; x <= 12; x += 0.02) sup = std::max(sup, std::fabs(G.derivative(x)));
            scaled.push_back(sup * n / std::log(n));
        }
        const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
        EXPECT_LT(*hi / *lo, 2.0) << "m=" << m;
    }
}

TEST(StarShift, Values) {
    EXPECT_NEAR(star_shift(1), 1 - euler_gamma, 1e-15);
    for (int n : {100, 1000, 100000}) {
        const double E = star_shift(n);
        const double n2 = 1.0 * n * n;
        const double euler = 1.0 / (2 * n) - 1.0 / (12 * n2) + 1.0 / (120 * n2 * n2);
        EXPECT_NEAR(E, euler, 1e-13) << n;
    }
}

TEST(StarShift, StarredDistanceCloseToPlain) {
    for (auto p : {make_params(300, 0), make_params(500, 2)}) {
        const auto w = exact_pmf_convolution(p);
        const double shift = lattice_atom(p, 0);
        const double E = star_shift(p);
        const auto F = gumbel_target(p.m);
        const double plain = d_k_lattice_vs_continuous(w, AtomMap{1.0 / p.n, shift}, F).value;
        const double star = d_k_lattice_vs_continuous(w, AtomMap{1.0 / p.n, shift + E}, F).value;
        EXPECT_LE(std::fabs(star - plain), 2 * GumbelLike(p.m).pdf_max() * std::fabs(E));
    }
}

// --- special functions ------------------------------------------------------

TEST(Special, Basics) {
    EXPECT_DOUBLE_EQ(normal_cdf(0), 0.5);
    for (double l : {0.1, 1.0, 7.5, 300.0}) EXPECT_NEAR(poisson_pmf(l, 0), std::exp(-l), 1e-15 * std::exp(-l) + 1e-300);
    EXPECT_EQ(poisson_pmf(0, 0), 1.0);
    EXPECT_EQ(poisson_pmf(2, -1), 0.0);
}

TEST(Special, PoissonAtModeMatchesStirling) {
    const double l = 1e4;
    // Po(l){l} = exp(-(1/(12l) - 1/(360 l^3) + 1/(1260 l^5))) / sqrt(2 pi l)
    const double stirling =
        std::exp(-(1 / (12 * l) - 1 / (360 * l * l * l) + 1 / (1260 * std::pow(l, 5)))) / std::sqrt(2 * M_PI * l);
    EXPECT_NEAR(poisson_pmf(l, 10000) / stirling, 1.0, 1e-12);
}

TEST(Special, PoissonRangeMatchesPointwise) {
    for (double l : {0.3, 12.0, 4000.0}) {
        const auto [lo, hi] = poisson_support(l, 1e-15);
        const auto r = poisson_pmf_range(l, lo, hi);
        long double s = 0;
        for (std::int64_t k = lo; k <= hi; ++k) {
            const double pk = poisson_pmf(l, k);
            EXPECT_NEAR(static_cast<double>(r[static_cast<std::size_t>(k - lo)]), pk, 1e-13 * pk + 1e-300);
            s += r[static_cast<std::size_t>(k - lo)];
        }
        EXPECT_NEAR(static_cast<double>(s), 1.0, 3e-15);
    }
}

TEST(Special, ScaledUpperGammaMatchesQuadrature) {
    for (double x : {0.01, 0.4, 1.0, 3.0, 25.0, 300.0}) {
        const int lo = -40, hi = 3;
        const auto psi = scaled_upper_gamma(lo, hi, x, 1e-15);
        for (int s = lo; s <= hi; ++s) {
            double ref;
            if (s > 0) {
                ref = std::exp(x - s * std::log(x)) * boost::math::tgamma(static_cast<double>(s), x);
            } else {
                ref = integrate([&](double t) { return std::pow(1 + t, s - 1) * std::exp(-x * t); }, 0, inf, 1e-15);
            }
            EXPECT_NEAR(psi[static_cast<std::size_t>(s - lo)] / ref, 1.0, 1e-12) << "x=" << x << " s=" << s;
        }
    }
}

// --- Poisson family ---------------------------------------------------------

TEST(PoissonLaw, MassAndSupport) {
    for (double l : {0.0, 1e-9, 0.5, 30.0, 1e6}) {
        const auto po = poisson_law(l);
        EXPECT_NEAR(po.mass() + po.tail_deficit, 1.0, 1e-12);
        EXPECT_LE(po.tail_deficit, 1e-12);
    }
}

TEST(CorrectedPoisson, Examples) {
    // m = n-1: lambda_n = 0, all mass at 0
    EXPECT_NEAR(corrected_poisson_pmf(make_params(7, 6), 0), 1.0, 1e-15);
    EXPECT_NEAR(corrected_poisson_pmf(make_params(7, 6), 1), 0.0, 1e-15);
    const auto s = moments(make_params(100, 90));
    double l2 = 0;
    for (int i = 91; i <= 100; ++i) l2 += std::pow(1 - i / 100.0, 2);
    EXPECT_NEAR(s.lambda(2), l2, 1e-15);
    EXPECT_NEAR(corrected_poisson_pmf(make_params(100, 90), 0), std::exp(-0.45) * (1 - l2 / 2), 1e-15);
    const double k3 = std::exp(-0.45) * (std::pow(0.45, 3) / 6 + (0.45 - std::pow(0.45, 3) / 6) * l2 / 2);
    EXPECT_NEAR(corrected_poisson_pmf(make_params(100, 90), 3), k3, 1e-15);
}

TEST(CorrectedPoisson, RemainderIsOrderOneOverN) {
    const double lam = 2;
    std::vector<double> scaled;
    for (int n : {100, 1000, 10000}) {
        const int m = n - static_cast<int>(std::ceil(std::sqrt(2 * lam * n)));
        const auto p = make_params(n, m);
        const auto wt = shifted_law(exact_pmf_convolution(p), p);
        const auto s = moments(p);
        double e = 0;
        for (int k = 0; k <= 3; ++k) e = std::max(e, std::fabs(wt.at(k) - corrected_poisson_pmf(s, k)));
        scaled.push_back(n * e);
    }
    const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
    EXPECT_LT(*hi / *lo, 3.0);
}

TEST(CompoundPoisson, Parameters) {
    // n = 2, m = 0: mu_n = 3, sigma^2 = 2, so sigma^2 - mu_n = -1 is an integer
    auto d = cp_parameters(make_params(2, 0));
    EXPECT_NEAR(d.a, 0.0, 1e-12);
    EXPECT_NEAR(d.mu, 2.0, 1e-12);
    EXPECT_EQ(d.c, -1);

    for (auto p : {make_params(100, 50), make_params(400, 30), make_params(1000, 950)}) {
        const auto s = moments(p);
        d = cp_parameters(p);
        EXPECT_NEAR(d.mu + d.a, s.mu_n + d.c, 1e-9 * s.sigma2_n);
        EXPECT_NEAR(d.mu + 2 * d.a, s.sigma2_n, 1e-9 * s.sigma2_n);
        EXPECT_GE(d.a, 0.0);
        EXPECT_LT(d.a, 1.0);
        const auto pi = compound_poisson_pmf(d.mu, d.a, compound_poisson_extent(d.mu, d.a, 1e-15));
        EXPECT_NEAR(pi.mean() / (s.mu_n + d.c), 1.0, 1e-6);
        EXPECT_NEAR(pi.variance() / s.sigma2_n, 1.0, 1e-6);
    }
}

TEST(CompoundPoisson, SmallAtoms) {
    const double mu = 1.7, a = 0.6;
    const auto pi = compound_poisson_pmf(mu, a, 40);
    const double base = std::exp(-mu - a / 2);
    EXPECT_NEAR(pi.at(0), base, 1e-16);
    EXPECT_NEAR(pi.at(1), mu * base, 1e-16);
    EXPECT_NEAR(pi.at(2), (mu * mu / 2 + a / 2) * base, 1e-16);
    EXPECT_THROW(compound_poisson_pmf(-1, 0.5, 10), precondition_error);
    EXPECT_THROW(compound_poisson_pmf(1, -0.5, 10), precondition_error);
}

TEST(CompoundPoisson, RecursionMatchesConvolution) {
    for (auto [mu, a] : {std::pair{0.3, 0.9}, {5.0, 0.2}, {200.0, 0.7}, {3000.0, 0.01}}) {
        const auto k = compound_poisson_extent(mu, a, 1e-16);
        const auto r = compound_poisson_pmf(mu, a, k);
        const auto d = compound_poisson_pmf_direct(mu, a, k);
        for (std::int64_t i = 0; i <= k; ++i) EXPECT_NEAR(r.at(i), d.at(i), 1e-12);
        EXPECT_NEAR(r.mean(), mu + a, 1e-9 * (mu + a));
        EXPECT_NEAR(r.variance(), mu + 2 * a, 1e-8 * (mu + 2 * a));
    }
}

// --- Poisson-Charlier -------------------------------------------------------

TEST(Charlier, LowOrders) {
    const double l = 3.5;
    for (std::int64_t j : {0, 1, 4, 9}) {
        EXPECT_EQ(charlier_polynomial(0, j, l, CharlierForm::classical), 1.0);
        EXPECT_NEAR(charlier_polynomial(1, j, l, CharlierForm::classical), 1 - j / l, 1e-15);
        // C_2 = 1 - 2j/l + j(j-1)/l^2
        EXPECT_NEAR(charlier_polynomial(2, j, l, CharlierForm::classical), 1 - 2 * j / l + j * (j - 1) / (l * l),
                    1e-14);
        EXPECT_NEAR(charlier_polynomial(1, j, l, CharlierForm::as_printed), 1 + j / (l * l), 1e-15);
    }
}

TEST(Charlier, OrthogonalUnderPoissonWeight) {
    const double l = 6;
    const auto po = poisson_law(l, 1e-17);
    for (int r = 0; r <= 4; ++r)
        for (int s = 0; s <= 4; ++s) {
            long double ip = 0;
            for (auto j = po.first(); j <= po.last(); ++j)
                ip += po.at(j) * charlier_polynomial(r, j, l, CharlierForm::classical) *
                      charlier_polynomial(s, j, l, CharlierForm::classical);
            const double want = r == s ? std::tgamma(r + 1) / std::pow(l, r) : 0.0;
            EXPECT_NEAR(static_cast<double>(ip), want, 1e-12);
        }
}

// The convention test: only the classical polynomial with alternating signs
// reproduces the difference-form measure.
TEST(Charlier, ConventionAgainstDifferenceForm) {
    for (auto p : {make_params(40, 8), make_params(60, 20), make_params(100, 70), make_params(200, 150)}) {
        const auto s = moments(p);
        if (s.sigma2_n > 50) continue;
        const auto pc = build_poisson_charlier(p, 3);
        const auto& mc = pc.measure;
        const auto lo = pc.nu.first(), hi = pc.nu.last();
        const auto ref = pc_difference_form(mc.lambda, mc.coeffs, lo, hi);
        const auto good = pc_charlier_form(mc.lambda, mc.coeffs, lo, hi, CharlierForm::classical, CharlierSign::alternating);
        double worst = 0;
        for (auto k = lo; k <= hi; ++k) worst = std::max(worst, std::fabs(good.at(k) - ref.at(k)));
        EXPECT_LT(worst, 1e-8) << to_string(p);

        for (auto [form, sign] : {std::pair{CharlierForm::as_printed, CharlierSign::alternating},
                                  {CharlierForm::as_printed, CharlierSign::leading_one},
                                  {CharlierForm::classical, CharlierSign::leading_one}}) {
            const auto bad = pc_charlier_form(mc.lambda, mc.coeffs, lo, hi, form, sign);
            double gap = 0;
            for (auto k = lo; k <= hi; ++k) gap = std::max(gap, std::fabs(bad.at(k) - ref.at(k)));
            EXPECT_GT(gap, 1e-6) << to_string(p);
        }
    }
}

TEST(Charlier, ExpTruncatedExactVsDouble) {
    const std::vector<Rational> hq{0, Rational(-1, 3), Rational(1, 6), Rational(7, 5)};
    const std::vector<double> hd{0, -1.0 / 3, 1.0 / 6, 7.0 / 5};
    const auto q = exp_truncated(hq, 3);
    const auto d = exp_truncated(hd, 3);
    ASSERT_EQ(q.size(), d.size());
    EXPECT_EQ(q.size(), 10u);
    EXPECT_EQ(q[0], Rational(1));
    EXPECT_EQ(q[1], Rational(-1, 3));
    // w^2: h2 + h1^2/2 = 1/6 + 1/18
    EXPECT_EQ(q[2], Rational(2, 9));
    for (std::size_t i = 0; i < q.size(); ++i) EXPECT_NEAR(d[i], q[i].convert_to<double>(), 1e-15);
}

TEST(Charlier, MassRegimeAndTranslation) {
    for (auto p : {make_params(256, 64), make_params(2000, 500), make_params(1000, 936), make_params(4000, 3000),
                   make_params(10000, 9748)})
        for (int R : {3, 4, 5}) {
            const auto s = moments(p);
            const auto pc = build_poisson_charlier(p, R);
            EXPECT_NEAR(pc.nu.total_mass(), 1.0, 1e-10) << to_string(p) << " R=" << R;
            EXPECT_EQ(pc.measure.coeffs.at(0), 1.0);
            EXPECT_EQ(pc.measure.degree(), pc_nominal_degree(R, pc.measure.regime));
            if (s.a(2) > 1) {
                EXPECT_EQ(pc.measure.regime, PCRegime::a2_large);
                EXPECT_EQ(pc.measure.c, static_cast<std::int64_t>(std::floor(s.a(2))));
            } else {
                EXPECT_EQ(pc.measure.regime, PCRegime::a2_small);
                EXPECT_EQ(pc.measure.c, 0);
            }
        }
    EXPECT_THROW(build_poisson_charlier(make_params(256, 64), 2), precondition_error);
}

TEST(Charlier, TVImprovesWithOrder) {
    const auto p = make_params(2000, 500);
    const auto s = moments(p);
    ASSERT_GT(s.a(2), 1);
    const auto w = shifted_law(exact_pmf_convolution(p), p);
    double prev = inf;
    for (int R : {3, 4, 5}) {
        const auto pc = build_poisson_charlier(p, R);
        const double d = d_tv_signed(w.shifted(pc.measure.c), pc.nu).value;
        EXPECT_LT(d, prev) << "R=" << R;
        prev = d;
    }
}

// The emitted measure against the difference construction carried out with
// 100 significant digits.
TEST(Charlier, BuildMatchesHighPrecisionDifferences) {
    using F = boost::multiprecision::cpp_bin_float_100;
    const auto pc = build_poisson_charlier(make_params(2000, 500), 5);
    const auto& co = pc.measure.coeffs;
    const double lam = pc.measure.lambda;
    const auto D = static_cast<std::int64_t>(co.size()) - 1;
    const auto lo = pc.nu.first(), hi = pc.nu.last();
    const auto ext = std::max<std::int64_t>(0, lo - D);
    std::vector<F> po, acc;
    for (auto j = ext; j <= hi; ++j) po.push_back(exp(F(j) * log(F(lam)) - F(lam) - lgamma(F(j + 1))));
    for (const auto& q : po) acc.push_back(F(co.back()) * q);
    for (auto r = D - 1; r >= 0; --r)
        for (std::size_t i = acc.size(); i-- > 0;) acc[i] = (i ? acc[i - 1] : F(0)) - acc[i] + F(co[r]) * po[i];
    double worst = 0;
    for (auto j = lo; j <= hi; ++j)
        worst = std::max(worst, std::fabs(pc.nu.at(j) - static_cast<double>(acc[static_cast<std::size_t>(j - ext)])));
    EXPECT_LT(worst, 1e-15);
}
