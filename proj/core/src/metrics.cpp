#include "coupon/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "coupon/errors.hpp"

namespace coupon {

DistanceResult d_tv_lattice(const LatticePMF& p, const LatticePMF& q) {
    DistanceResult r;
    r.truncation_slack = (p.tail_deficit + q.tail_deficit) / 2;
    if (p.empty() && q.empty()) return r;
    const std::int64_t lo = std::min(p.empty() ? q.first() : p.first(), q.empty() ? p.first() : q.first());
    const std::int64_t hi = std::max(p.empty() ? q.last() : p.last(), q.empty() ? p.last() : q.last());
    long double s = 0;
    double best = -1;
    for (std::int64_t k = lo; k <= hi; ++k) {
        const double d = std::fabs(p.at(k) - q.at(k));
        s += d;
        if (d > best) {
            best = d;
            r.attained_at = static_cast<double>(k);
        }
    }
    r.value = static_cast<double>(s / 2);
    return r;
}

DistanceResult d_tv_signed(const LatticePMF& p, const SignedLatticeMeasure& nu) {
    const double mass = nu.total_mass();
    if (std::fabs(mass - 1) > 1e-6)
        throw precondition_error("d_tv_signed: signed measure mass differs from 1 by more than 1e-6");
    DistanceResult r;
    r.truncation_slack = p.tail_deficit / 2 + std::fabs(mass - 1) / 2;
    const std::int64_t lo = std::min(p.first(), nu.first());
    const std::int64_t hi = std::max(p.last(), nu.last());
    long double s = 0;
    double best = -1;
    for (std::int64_t k = lo; k <= hi; ++k) {
        const double d = std::fabs(p.at(k) - nu.at(k));
        s += d;
        if (d > best) {
            best = d;
            r.attained_at = static_cast<double>(k);
        }
    }
    r.value = static_cast<double>(s / 2);
    return r;
}

DistanceResult sup_pointwise(const LatticePMF& p, const SignedLatticeMeasure& nu) {
    DistanceResult r;
    r.truncation_slack = p.tail_deficit;
    const std::int64_t lo = std::min(p.first(), nu.first());
    const std::int64_t hi = std::max(p.last(), nu.last());
    for (std::int64_t k = lo; k <= hi; ++k) {
        const double d = std::fabs(p.at(k) - nu.at(k));
        if (d > r.value) {
            r.value = d;
            r.attained_at = static_cast<double>(k);
        }
    }
    return r;
}

DistanceResult d_k_lattice(const LatticePMF& p, const LatticePMF& q) {
    DistanceResult r;
    r.truncation_slack = std::max(p.tail_deficit, q.tail_deficit);
    const std::int64_t lo = std::min(p.first(), q.first());
    const std::int64_t hi = std::max(p.last(), q.last());
    long double cp = 0, cq = 0;
    for (std::int64_t k = lo; k <= hi; ++k) {
        cp += p.at(k);
        cq += q.at(k);
        const double d = static_cast<double>(std::fabs(cp - cq));
        if (d > r.value) {
            r.value = d;
            r.attained_at = static_cast<double>(k);
        }
    }
    return r;
}

DistanceResult d_k_lattice_vs_continuous(const LatticePMF& p, const AtomMap& map, const ContinuousCDF& F) {
    if (!(map.scale > 0)) throw precondition_error("d_k_lattice_vs_continuous: atom map must be increasing");
    DistanceResult r;
    r.truncation_slack = p.tail_deficit;
    long double c = 0;
    for (std::size_t i = 0; i < p.weights.size(); ++i) {
        const std::int64_t k = p.offset + static_cast<std::int64_t>(i);
        const double x = map(k);
        const double Fx = F(x);
        const double before = static_cast<double>(c);
        c += p.weights[i];
        const double after = static_cast<double>(c);
        const double d = std::max(std::fabs(before - Fx), std::fabs(after - Fx));
        if (d > r.value) {
            r.value = d;
            r.attained_at = x;
        }
    }
    return r;
}

DistanceResult d_tv_shift(const LatticePMF& p) {
    DistanceResult r;
    r.truncation_slack = p.tail_deficit;
    long double s = 0;
    double prev = 0;
    double best = -1;
    for (std::size_t i = 0; i <= p.weights.size(); ++i) {
        const double cur = i < p.weights.size() ? p.weights[i] : 0.0;
        const double d = std::fabs(cur - prev);
        s += d;
        if (d > best) {
            best = d;
            r.attained_at = static_cast<double>(p.offset + static_cast<std::int64_t>(i));
        }
        prev = cur;
    }
    r.value = static_cast<double>(s / 2);
    return r;
}

} // namespace coupon
