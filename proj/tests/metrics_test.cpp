#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "coupon/collector.hpp"
#include "coupon/errors.hpp"
#include "coupon/metrics.hpp"
#include "coupon/poisson.hpp"
#include "coupon/special.hpp"

using namespace coupon;

namespace {

LatticePMF random_pmf(std::mt19937_64& g) {
    std::uniform_int_distribution<int> off(-5, 5), len(1, 12);
    std::uniform_real_distribution<double> w(0, 1);
    LatticePMF p;
    p.offset = off(g);
    p.weights.resize(static_cast<std::size_t>(len(g)));
    double s = 0;
    for (auto& x : p.weights) s += (x = w(g) * w(g));
    for (auto& x : p.weights) x /= s;
    return p;
}

LatticePMF from(std::int64_t offset, std::vector<double> w) {
    LatticePMF p;
    p.offset = offset;
    p.weights = std::move(w);
    return p;
}

} // namespace

TEST(TotalVariation, Basics) {
    const auto a = from(0, {0.2, 0.5, 0.3});
    EXPECT_EQ(d_tv_lattice(a, a).value, 0.0);
    EXPECT_DOUBLE_EQ(d_tv_lattice(LatticePMF::point_mass(0), LatticePMF::point_mass(1)).value, 1.0);
    const auto u = from(1, {0.5, 0.5});
    EXPECT_DOUBLE_EQ(d_tv_lattice(u, u.shifted(1)).value, 0.5);
}

TEST(TotalVariation, SlackFromTails) {
    auto a = from(0, {0.5, 0.4});
    a.tail_deficit = 0.1;
    auto b = from(0, {0.5, 0.45});
    b.tail_deficit = 0.05;
    const auto d = d_tv_lattice(a, b);
    EXPECT_NEAR(d.value, 0.025, 1e-15);
    EXPECT_NEAR(d.truncation_slack, 0.075, 1e-15);
    EXPECT_EQ(d.attained_at, 1);
}

TEST(TotalVariation, SignedMeasure) {
    const auto po = poisson_law(4.0, 1e-14);
    SignedLatticeMeasure nu{po.offset, po.weights};
    EXPECT_EQ(d_tv_signed(po, nu).value, 0.0);
    const auto trunc = poisson_law(4.0, 1e-6);
    EXPECT_LE(d_tv_signed(trunc, nu).value, trunc.tail_deficit + 1e-15);
    SignedLatticeMeasure bad{0, {0.5, 0.4}};
    EXPECT_THROW(d_tv_signed(po, bad), precondition_error);
}

TEST(TotalVariation, ShiftOfLaws) {
    EXPECT_DOUBLE_EQ(d_tv_shift(LatticePMF::point_mass(3)).value, 1.0);
    // geometric with success j/n: exactly j/n
    for (double q : {0.05, 0.3, 0.9}) {
        LatticePMF g;
        g.offset = 1;
        for (int k = 1; k < 2000; ++k) g.weights.push_back(q * std::pow(1 - q, k - 1));
        EXPECT_NEAR(d_tv_shift(g).value, q, 1e-12);
    }
}

TEST(Kolmogorov, PointMassVsNormal) {
    const ContinuousCDF phi{"normal", [](double x) { return normal_cdf(x); }};
    const auto d = d_k_lattice_vs_continuous(LatticePMF::point_mass(0), AtomMap{}, phi);
    EXPECT_DOUBLE_EQ(d.value, 0.5);
    EXPECT_EQ(d.attained_at, 0.0);
}

TEST(Kolmogorov, DiscretizedContinuousBoundedByJump) {
    // mass at the quantiles of the logistic law; d_K <= largest jump
    const ContinuousCDF F{"logistic", [](double x) { return 1 / (1 + std::exp(-x)); }};
    const int N = 200;
    const double h = 1e-3;
    std::vector<double> xs;
    for (int k = 0; k < N; ++k) {
        const double u = (k + 0.5) / N;
        xs.push_back(std::log(u / (1 - u)));
    }
    // snapped to a fine lattice
    LatticePMF fine;
    fine.offset = -20000;
    fine.weights.assign(40001, 0.0);
    for (double x : xs) fine.weights[static_cast<std::size_t>(std::llround(x / h) - fine.offset)] += 1.0 / N;
    const auto d = d_k_lattice_vs_continuous(fine, AtomMap{h, 0}, F);
    EXPECT_LE(d.value, 1.0 / N + h);
}

TEST(Properties, KolmogorovBelowTotalVariation) {
    std::mt19937_64 g(11);
    for (int i = 0; i < 100; ++i) {
        const auto a = random_pmf(g), b = random_pmf(g);
        EXPECT_LE(d_k_lattice(a, b).value, d_tv_lattice(a, b).value + 1e-15);
    }
}

TEST(Properties, TriangleAndSymmetry) {
    std::mt19937_64 g(12);
    for (int i = 0; i < 100; ++i) {
        const auto a = random_pmf(g), b = random_pmf(g), c = random_pmf(g);
        const double ab = d_tv_lattice(a, b).value, bc = d_tv_lattice(b, c).value, ac = d_tv_lattice(a, c).value;
        EXPECT_EQ(ab, d_tv_lattice(b, a).value);
        EXPECT_LE(ac, ab + bc + 1e-15);
    }
}

TEST(Properties, TranslationInvariance) {
    std::mt19937_64 g(13);
    for (int i = 0; i < 100; ++i) {
        const auto a = random_pmf(g), b = random_pmf(g);
        const std::int64_t c = static_cast<std::int64_t>(g() % 1000) - 500;
        EXPECT_EQ(d_tv_lattice(a, b).value, d_tv_lattice(a.shifted(c), b.shifted(c)).value);
        EXPECT_EQ(d_k_lattice(a, b).value, d_k_lattice(a.shifted(c), b.shifted(c)).value);
    }
}

TEST(Lattice, ConvolveTracksDeficit) {
    auto a = from(1, {0.5, 0.25});
    a.tail_deficit = 0.25;
    auto b = from(0, {0.9});
    b.tail_deficit = 0.1;
    const auto c = convolve(a, b);
    EXPECT_EQ(c.offset, 1);
    EXPECT_NEAR(c.mass() + c.tail_deficit, 1.0, 1e-15);
    EXPECT_NEAR(c.at(2), 0.225, 1e-15);
}
