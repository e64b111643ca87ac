#pragma once

#include <cstdint>
#include <vector>

namespace coupon {

// Nonnegative weights on {offset, offset+1, ...}; tail_deficit is the mass
// that was cut off to the right of the stored range.
struct LatticePMF {
    std::int64_t offset = 0;
    std::vector<double> weights;
    double tail_deficit = 0.0;

    static LatticePMF point_mass(std::int64_t at);

    std::int64_t first() const { return offset; }
    std::int64_t last() const { return offset + static_cast<std::int64_t>(weights.size()) - 1; }
    bool empty() const { return weights.empty(); }

    double at(std::int64_t k) const;
    // P(X <= k), ignoring the deficit (which lives beyond last()).
    double cdf(std::int64_t k) const;
    double mass() const;
    double mean() const;
    double variance() const;

    LatticePMF shifted(std::int64_t c) const;
    // Prefix sums: cumulative()[i] = P(X <= offset + i).
    std::vector<double> cumulative() const;
};

// Real weights on a contiguous range, e.g. a Poisson-Charlier measure.
struct SignedLatticeMeasure {
    std::int64_t offset = 0;
    std::vector<double> weights;

    std::int64_t first() const { return offset; }
    std::int64_t last() const { return offset + static_cast<std::int64_t>(weights.size()) - 1; }
    double at(std::int64_t k) const;
    double total_mass() const;
    SignedLatticeMeasure shifted(std::int64_t c) const;
};

// Law of X + Y for independent X, Y.
LatticePMF convolve(const LatticePMF& a, const LatticePMF& b);

} // namespace coupon
