#pragma once

#include <cstdint>

#include "coupon/gumbel.hpp"
#include "coupon/lattice.hpp"

namespace coupon {

struct DistanceResult {
    double value = 0;
    double attained_at = 0;       // lattice index, or real abscissa for d_K
    double truncation_slack = 0;  // worst-case effect of truncated tails
};

// Affine map k -> scale * k + shift placing lattice atoms on the real line.
struct AtomMap {
    double scale = 1;
    double shift = 0;
    double operator()(std::int64_t k) const { return scale * static_cast<double>(k) + shift; }
};

DistanceResult d_tv_lattice(const LatticePMF& p, const LatticePMF& q);
// Half-L1 against a signed measure of (nearly) unit mass; throws
// precondition_error when |mass(nu) - 1| > 1e-6.
DistanceResult d_tv_signed(const LatticePMF& p, const SignedLatticeMeasure& nu);
// sup_k |p{k} - nu{k}|
DistanceResult sup_pointwise(const LatticePMF& p, const SignedLatticeMeasure& nu);
// Kolmogorov distance between two lattice laws.
DistanceResult d_k_lattice(const LatticePMF& p, const LatticePMF& q);
// sup_x |F_p(x) - F(x)| evaluated at the atoms x_k = map(k), both one-sided
// limits per atom.
DistanceResult d_k_lattice_vs_continuous(const LatticePMF& p, const AtomMap& map, const ContinuousCDF& F);
// d_TV(X, X+1) = (1/2) sum_k |p{k} - p{k-1}|
DistanceResult d_tv_shift(const LatticePMF& p);

} // namespace coupon
