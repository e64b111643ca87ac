#include "coupon/lattice.hpp"

#include <cmath>

namespace coupon {

LatticePMF LatticePMF::point_mass(std::int64_t at) {
    return LatticePMF{at, {1.0}, 0.0};
}

double LatticePMF::at(std::int64_t k) const {
    if (k < first() || k > last()) return 0.0;
    return weights[static_cast<std::size_t>(k - offset)];
}

double LatticePMF::cdf(std::int64_t k) const {
    if (k < first()) return 0.0;
    long double s = 0;
    const std::int64_t hi = k < last() ? k : last();
    for (std::int64_t j = first(); j <= hi; ++j) s += weights[static_cast<std::size_t>(j - offset)];
    return static_cast<double>(s);
}

std::vector<double> LatticePMF::cumulative() const {
    std::vector<double> out(weights.size());
    long double s = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        s += weights[i];
        out[i] = static_cast<double>(s);
    }
    return out;
}

double LatticePMF::mass() const {
    long double s = 0;
    for (double w : weights) s += w;
    return static_cast<double>(s);
}

double LatticePMF::mean() const {
    long double s = 0, tot = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        s += static_cast<long double>(weights[i]) * static_cast<long double>(i);
        tot += weights[i];
    }
    return static_cast<double>(static_cast<long double>(offset) + s / tot);
}

double LatticePMF::variance() const {
    const long double mu = static_cast<long double>(mean()) - static_cast<long double>(offset);
    long double s = 0, tot = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const long double d = static_cast<long double>(i) - mu;
        s += weights[i] * d * d;
        tot += weights[i];
    }
    return static_cast<double>(s / tot);
}

LatticePMF LatticePMF::shifted(std::int64_t c) const {
    LatticePMF out = *this;
    out.offset += c;
    return out;
}

double SignedLatticeMeasure::at(std::int64_t k) const {
    if (k < first() || k > last()) return 0.0;
    return weights[static_cast<std::size_t>(k - offset)];
}

double SignedLatticeMeasure::total_mass() const {
    long double s = 0;
    for (double w : weights) s += w;
    return static_cast<double>(s);
}

SignedLatticeMeasure SignedLatticeMeasure::shifted(std::int64_t c) const {
    SignedLatticeMeasure out = *this;
    out.offset += c;
    return out;
}

LatticePMF convolve(const LatticePMF& a, const LatticePMF& b) {
    LatticePMF out;
    if (a.empty() || b.empty()) return out;
    out.offset = a.offset + b.offset;
    out.weights.assign(a.weights.size() + b.weights.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.weights.size(); ++i) {
        if (a.weights[i] == 0.0) continue;
        for (std::size_t j = 0; j < b.weights.size(); ++j) out.weights[i + j] += a.weights[i] * b.weights[j];
    }
    // mass lost from either factor is lost from the sum
    out.tail_deficit = a.tail_deficit + b.tail_deficit - a.tail_deficit * b.tail_deficit;
    return out;
}

} // namespace coupon
