#pragma once

#include <cstdint>

#include "coupon/collector.hpp"
#include "coupon/lattice.hpp"

namespace coupon {

// Po(lambda) stored on [0, hi] with hi chosen so the right tail is below eps.
LatticePMF poisson_law(double lambda, double eps = 1e-15);

// Two-term expansion of P(W~ = k) around Po(lambda_n):
//   e^{-l}[l^k/k! + (l^{k-2}/(k-2)! - l^k/k!) lambda_{n,2}/2].
double corrected_poisson_pmf(const CollectorParams& p, std::int64_t k);
double corrected_poisson_pmf(const MomentSummary& s, std::int64_t k);

// Law of Z1 + 2 Z2 with Z1 ~ Po(mu), Z2 ~ Po(a/2), translated by c.
struct CompoundPoissonDist {
    double mu = 0;
    double a = 0;
    std::int64_t c = 0;

    double mean() const { return mu + a; }
    double variance() const { return mu + 2 * a; }
};

// mu = s2 - 2<s2 - mu_n>, a = <s2 - mu_n>, c = floor(s2 - mu_n).
CompoundPoissonDist cp_parameters(const CollectorParams& p);
CompoundPoissonDist cp_parameters(const MomentSummary& s);

// pi{0..k_max} by k pi_k = mu pi_{k-1} + a pi_{k-2}; tail_deficit = 1 - mass.
LatticePMF compound_poisson_pmf(double mu, double a, std::int64_t k_max);
// Same law by direct convolution of the two Poisson counts (cross-check).
LatticePMF compound_poisson_pmf_direct(double mu, double a, std::int64_t k_max);
// Smallest k_max whose right tail is below eps.
std::int64_t compound_poisson_extent(double mu, double a, double eps);

} // namespace coupon
