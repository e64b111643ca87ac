#pragma once

// Scalar-generic engines behind collector.hpp. Instantiate with
// boost::multiprecision::cpp_rational to get exact answers for small n.

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "coupon/errors.hpp"
#include "coupon/params.hpp"

namespace coupon {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

namespace detail {

template <class T>
T ratio(long long a, long long b) {
    if constexpr (std::is_floating_point_v<T>) {
        return static_cast<T>(a) / static_cast<T>(b);
    } else {
        return T(a, b);
    }
}

} // namespace detail

// P(W~ = t), t = 0..len-1, from folding the geometric summands k = n..m+1.
// Each entry is exact (no per-factor truncation); mass beyond len is lost.
template <class T>
std::vector<T> shifted_pmf_prefix(const CollectorParams& p, std::size_t len) {
    std::vector<T> cur(len, T(0));
    if (len == 0) return cur;
    cur[0] = T(1);
    std::vector<T> next(len);
    for (int k = p.n - 1; k >= p.m + 1; --k) {  // k = n contributes a point mass at 0
        const T s = detail::ratio<T>(k, p.n);
        const T r = T(1) - s;
        T run = T(0);
        for (std::size_t t = 0; t < len; ++t) {
            run = r * run + s * cur[t];
            if constexpr (std::is_floating_point_v<T>) {
                if (run < T(1e-300)) run = T(0);  // keep denormals out of the loop
            }
            next[t] = run;
        }
        cur.swap(next);
    }
    return cur;
}

// P(W = t), t = 0..t_max, through the number of distinct coupons seen.
template <class T>
std::vector<T> markov_pmf(const CollectorParams& p, int t_max) {
    const int target = p.n - p.m;
    std::vector<T> out(static_cast<std::size_t>(t_max) + 1, T(0));
    // dist[d] = P(d distinct after t draws), d < target
    std::vector<T> dist(static_cast<std::size_t>(target), T(0));
    dist[0] = T(1);
    const T finish = detail::ratio<T>(p.m + 1, p.n);
    for (int t = 0; t < t_max; ++t) {
        out[static_cast<std::size_t>(t) + 1] = dist[static_cast<std::size_t>(target) - 1] * finish;
        for (int d = target - 1; d >= 1; --d) {
            auto i = static_cast<std::size_t>(d);
            dist[i] = dist[i] * detail::ratio<T>(d, p.n) + dist[i - 1] * detail::ratio<T>(p.n - d + 1, p.n);
        }
        dist[0] = T(0);  // after the first draw at least one coupon is seen
    }
    return out;
}

// Exact P(W <= t); n <= 30, 1 <= t <= 200.
Rational cdf_inclusion_exclusion_exact(const CollectorParams& p, int t);

// Product-times-composition-sum form of P(W~ = k), generic scalar.
template <class T>
T shifted_pmf_compositions(const CollectorParams& p, int k) {
    T lead = T(1);
    for (int i = p.m + 1; i <= p.n; ++i) lead *= detail::ratio<T>(i, p.n);
    const int parts = p.n - p.m - 1;
    if (parts == 0) return k == 0 ? lead : T(0);
    std::vector<T> r;
    for (int i = p.m + 1; i <= p.n - 1; ++i) r.push_back(detail::ratio<T>(p.n - i, p.n));
    // h_k(r_1..r_parts) by explicit enumeration of the compositions
    T total = T(0);
    auto rec = [&](auto&& self, std::size_t idx, int left, const T& prod) -> void {
        if (idx + 1 == r.size()) {
            T v = prod;
            for (int j = 0; j < left; ++j) v *= r[idx];
            total += v;
            return;
        }
        T v = prod;
        for (int j = 0; j <= left; ++j) {
            self(self, idx + 1, left - j, v);
            v *= r[idx];
        }
    };
    rec(rec, 0, k, T(1));
    return lead * total;
}

// Mean and variance of W from the defining sums.
template <class T>
std::pair<T, T> mean_variance(const CollectorParams& p) {
    T mu = T(0), var = T(0);
    for (int k = p.m + 1; k <= p.n; ++k) {
        mu += detail::ratio<T>(p.n, k);
        var += detail::ratio<T>(static_cast<long long>(p.n) * (p.n - k), static_cast<long long>(k) * k);
    }
    return {mu, var};
}

} // namespace coupon
