#include <gtest/gtest.h>

#include <cmath>

#include "coupon/collector.hpp"
#include "coupon/collector_exact.hpp"
#include "coupon/errors.hpp"

using namespace coupon;

TEST(Params, Validation) {
    EXPECT_NO_THROW(make_params(2, 0));
    EXPECT_NO_THROW(make_params(2, 1));
    EXPECT_THROW(make_params(1, 0), precondition_error);
    EXPECT_THROW(make_params(5, 5), precondition_error);
    EXPECT_THROW(make_params(5, -1), precondition_error);
}

TEST(Moments, SmallExamples) {
    auto s = moments(make_params(6, 0));
    EXPECT_NEAR(s.mu_n, 14.7, 1e-12);
    EXPECT_NEAR(s.sigma2_n, 38.99, 1e-12);

    s = moments(make_params(100, 90));
    EXPECT_NEAR(s.lambda_n, 0.45, 1e-14);

    s = moments(make_params(2, 1));
    EXPECT_DOUBLE_EQ(s.mu_n, 1.0);
    EXPECT_DOUBLE_EQ(s.sigma2_n, 0.0);
    EXPECT_DOUBLE_EQ(s.lambda_prime_n, 0.0);
}

TEST(Moments, ExactRationalMeanVariance) {
    // 6 * (1 + 1/2 + ... + 1/6) = 147/10, variance 3899/100
    auto [mu, var] = mean_variance<Rational>(make_params(6, 0));
    EXPECT_EQ(mu, Rational(147, 10));
    EXPECT_EQ(var, Rational(3899, 100));
}

TEST(Moments, Identities) {
    for (int n : {2, 7, 30, 200, 1001})
        for (int m : {0, 1, n / 3, n / 2, n - 2, n - 1}) {
            if (m < 0 || m > n - 1) continue;
            const auto p = make_params(n, m);
            const auto s = moments(p, 6);
            const double scale = std::max(1.0, s.mu_n);
            EXPECT_NEAR(s.lambda_prime_n, s.mu_n - (n - m), 1e-12 * scale);
            EXPECT_NEAR(s.a(1), s.lambda_prime_n, 1e-12 * scale);
            EXPECT_NEAR(s.a(2), s.sigma2_n - s.a(1), 1e-11 * std::max(1.0, s.sigma2_n));
            const double closed = static_cast<double>(n - m) * (n - m - 1) / (2.0 * n);
            EXPECT_NEAR(s.lambda_n, closed, 1e-12 * std::max(1.0, closed));
            EXPECT_NEAR(s.lambda(1), s.lambda_n, 1e-12 * std::max(1.0, closed));
        }
}

TEST(Moments, LambdaTwoClosedForm) {
    const auto p = make_params(100, 90);
    const auto s = moments(p);
    const double d = 10;
    EXPECT_NEAR(s.lambda(2), d * (d - 1) * (d - 0.5) / (3.0 * 100 * 100), 1e-15);
}

TEST(Moments, LambdaPowerBound) {
    // lambda_{n,j} <= lambda_n (2 lambda_n / n)^{(j-1)/2}
    for (int n : {5, 20, 100, 1000, 5000})
        for (int m = 0; m <= n - 2; m += std::max(1, n / 17)) {
            const auto s = moments(make_params(n, m), 6);
            for (int j = 2; j <= 6; ++j)
                EXPECT_LE(s.lambda(j), s.lambda_n * std::pow(2 * s.lambda_n / n, (j - 1) / 2.0) * (1 + 1e-12))
                    << "n=" << n << " m=" << m << " j=" << j;
        }
}

TEST(ExactPmf, ConvolutionExamples) {
    auto w = exact_pmf_convolution(make_params(2, 0));
    EXPECT_EQ(w.offset, 2);
    EXPECT_NEAR(w.at(2), 0.5, 1e-15);
    EXPECT_NEAR(w.at(3), 0.25, 1e-15);
    EXPECT_NEAR(w.at(4), 0.125, 1e-15);
    EXPECT_EQ(w.at(1), 0.0);

    w = exact_pmf_convolution(make_params(3, 2));
    EXPECT_EQ(w.offset, 1);
    ASSERT_EQ(w.weights.size(), 1u);
    EXPECT_EQ(w.weights[0], 1.0);

    w = exact_pmf_convolution(make_params(3, 0));
    EXPECT_NEAR(w.cdf(3), 2.0 / 9, 1e-15);
}

TEST(ExactPmf, TailEpsRange) {
    const auto p = make_params(10, 0);
    EXPECT_THROW(exact_pmf_convolution(p, 0.0), precondition_error);
    EXPECT_THROW(exact_pmf_convolution(p, 1e-5), precondition_error);
    for (double eps : {1e-6, 1e-9, 1e-12}) {
        const auto w = exact_pmf_convolution(p, eps);
        EXPECT_LE(w.tail_deficit, eps);
        EXPECT_NEAR(w.mass() + w.tail_deficit, 1.0, 1e-12);
        for (double x : w.weights) EXPECT_GE(x, 0.0);
    }
}

TEST(ExactPmf, MarkovExamples) {
    const auto c = exact_pmf_convolution(make_params(2, 0));
    const auto mk = exact_pmf_markov(make_params(2, 0), 10);
    for (int t = 0; t <= 10; ++t) EXPECT_NEAR(mk.at(t), c.at(t), 1e-14);

    const auto pt = exact_pmf_markov(make_params(5, 4), 1);
    EXPECT_NEAR(pt.at(1), 1.0, 1e-15);
    EXPECT_NEAR(pt.tail_deficit, 0.0, 1e-15);

    EXPECT_NEAR(exact_pmf_markov(make_params(3, 0), 3).mass(), 2.0 / 9, 1e-15);
    EXPECT_THROW(exact_pmf_markov(make_params(5, 0), 4), precondition_error);
}

TEST(ExactPmf, InclusionExclusionExamples) {
    EXPECT_EQ(cdf_inclusion_exclusion_exact(make_params(3, 0), 3), Rational(2, 9));
    EXPECT_EQ(cdf_inclusion_exclusion_exact(make_params(4, 3), 1), Rational(1));
    EXPECT_EQ(cdf_inclusion_exclusion_exact(make_params(2, 0), 4), Rational(7, 8));
    EXPECT_THROW(cdf_inclusion_exclusion(make_params(31, 0), 10), precondition_error);
    EXPECT_THROW(cdf_inclusion_exclusion(make_params(5, 0), 201), precondition_error);
    EXPECT_THROW(cdf_inclusion_exclusion(make_params(5, 0), 0), precondition_error);
}

TEST(ExactPmf, RationalEnginesAgree) {
    // three engines in exact arithmetic: prefix convolution, Markov chain, inclusion-exclusion
    for (int n = 2; n <= 7; ++n)
        for (int m = 0; m < n; ++m) {
            const auto p = make_params(n, m);
            const int t_max = 14;
            const auto conv = shifted_pmf_prefix<Rational>(p, t_max + 1);
            const auto mk = markov_pmf<Rational>(p, t_max);
            Rational cum = 0;
            for (int t = 1; t <= t_max; ++t) {
                const int k = t - (n - m);
                const Rational c = k >= 0 ? conv[static_cast<std::size_t>(k)] : Rational(0);
                EXPECT_EQ(c, mk[static_cast<std::size_t>(t)]) << "n=" << n << " m=" << m << " t=" << t;
                cum += c;
                EXPECT_EQ(cum, cdf_inclusion_exclusion_exact(p, t)) << "n=" << n << " m=" << m << " t=" << t;
            }
        }
}

TEST(ExactPmf, BruteforceComposition) {
    EXPECT_NEAR(shifted_pmf_bruteforce(make_params(4, 2), 0), 0.75, 1e-15);
    EXPECT_NEAR(shifted_pmf_bruteforce(make_params(9, 8), 0), 1.0, 1e-15);
    const auto p = make_params(4, 1);
    const auto w = exact_pmf_convolution(p);
    EXPECT_NEAR(shifted_pmf_bruteforce(p, 2), w.at(p.needed() + 2), 1e-12);
    EXPECT_EQ(shifted_pmf_compositions<Rational>(p, 2), shifted_pmf_prefix<Rational>(p, 3)[2]);
    // C(k + parts - 1, k) far beyond 1e6
    EXPECT_THROW(shifted_pmf_bruteforce(make_params(60, 0), 40), precondition_error);
}

TEST(ExactPmf, MeanVarianceMatchMoments) {
    for (int n : {10, 57, 200})
        for (int m : {0, n / 4, n / 2, n - 3}) {
            const auto p = make_params(n, m);
            const auto w = exact_pmf_convolution(p, 1e-12);
            const auto s = moments(p);
            EXPECT_NEAR(w.mean() / s.mu_n, 1.0, 1e-6);
            EXPECT_NEAR(w.variance() / s.sigma2_n, 1.0, 1e-6);
        }
}

TEST(ExactPmf, SupportStartsAtNeeded) {
    for (int n : {3, 8, 40})
        for (int m = 0; m < n; m += 3) {
            const auto p = make_params(n, m);
            EXPECT_EQ(exact_pmf_convolution(p).first(), n - m);
            const auto mk = exact_pmf_markov(p, 2 * n);
            for (int t = 0; t < n - m; ++t) EXPECT_EQ(mk.at(t), 0.0);
            if (n <= 30) EXPECT_EQ(cdf_inclusion_exclusion_exact(p, std::max(1, n - m - 1)) == 0, n - m > 1);
        }
}

TEST(Regime, Labels) {
    EXPECT_EQ(classify_regime(make_params(1000, 31)), Regime::small);
    EXPECT_EQ(classify_regime(make_params(1000, 500)), Regime::medium);
    EXPECT_EQ(classify_regime(make_params(3200, 2915)), Regime::very_large);
    // floor(a_{n,2}) >= 1 with m/n >= 0.9
    EXPECT_EQ(classify_regime(make_params(100000, 90000)), Regime::large);
}
