#pragma once

#include <string_view>
#include <vector>

#include "coupon/lattice.hpp"
#include "coupon/params.hpp"

namespace coupon {

struct MomentSummary {
    double mu_n = 0;            // E W
    double sigma2_n = 0;        // Var W
    double lambda_n = 0;        // sum_{i>m} (1 - i/n)
    double lambda_prime_n = 0;  // E W~ = mu_n - (n-m)
    // Indexed by j = 0..J; index 0 holds the term count n-m.
    std::vector<double> lambda_nj;  // sum_{i=m+1}^n (1 - i/n)^j
    std::vector<double> a_nj;       // sum_{k=m+1}^n ((n-k)/k)^j

    double lambda(int j) const { return lambda_nj.at(static_cast<std::size_t>(j)); }
    double a(int j) const { return a_nj.at(static_cast<std::size_t>(j)); }
    double sigma_n() const;
};

MomentSummary moments(const CollectorParams& p, int J = 6);

// Law of W_{n,m} (offset n-m). Values inside the stored range are exact up to
// rounding; the right tail beyond it carries at most tail_eps of mass.
LatticePMF exact_pmf_convolution(const CollectorParams& p, double tail_eps = 1e-12);

// Same law through the distinct-count Markov chain, for t = n-m..t_max.
LatticePMF exact_pmf_markov(const CollectorParams& p, int t_max);

// P(W <= t) by inclusion-exclusion over surjection counts in exact integer
// arithmetic (n <= 30, t <= 200).
double cdf_inclusion_exclusion(const CollectorParams& p, int t);

// P(W~ = k) by enumerating compositions of k into n-m-1 parts.
double shifted_pmf_bruteforce(const CollectorParams& p, int k);

// W~ = W - (n-m).
LatticePMF shifted_law(const LatticePMF& w, const CollectorParams& p);

enum class Regime { small, medium, large, very_large };

std::string_view to_string(Regime r);
// m/n <= 0.1 small; < 0.9 medium; otherwise large iff floor(a_{n,2}) >= 1.
Regime classify_regime(const CollectorParams& p);
Regime classify_regime(const CollectorParams& p, const MomentSummary& s);

} // namespace coupon
