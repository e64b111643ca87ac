#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "coupon/lattice.hpp"
#include "coupon/params.hpp"

namespace coupon {

struct SimConfig {
    std::uint64_t seed = 0;
    std::int64_t trials = 100000;
    int threads = 1;  // 0: hardware concurrency
};

// Final positions of the two coupled walks, tallied per trial.
struct Histogram {
    std::int64_t offset = 0;
    std::vector<std::int64_t> counts;
    void add(std::int64_t k);
    void merge(const Histogram& other);
    std::int64_t total() const;
};

struct SimResult {
    double p_T_gt_r = 0;  // estimated probability the walks have not met
    double std_err = 0;
    std::optional<double> exact_d_tv;
    std::optional<double> bound;
    std::int64_t trials = 0;
    std::int64_t failures = 0;
    std::int64_t branch_hits = 0;  // uniform coupling: trials with U_1 = 2l
    Histogram first;               // law of the unshifted walk
    Histogram second;              // law of the shifted walk, minus 1
};

// Mineka coupling of walks started at 0 and 1 with independent steps
// step_pmfs[0..r-1]; estimates P(T > r).
SimResult simulate_mineka(const std::vector<LatticePMF>& step_pmfs, const SimConfig& config);

// Coupling of (V_r, V_r + 1), V_r a sum of r iid uniform{1..2l}: with
// probability (2l-1)/(2l) the first step absorbs the offset; otherwise the
// remaining steps differ by +-l until the gap closes.
SimResult simulate_uniform_embedding(int l, int r, const SimConfig& config);

struct EmbeddingPlan {
    int l = 0;         // even block width, from floor(n/m)
    double p = 0;      // (1 - 2m/n)^l m/n
    double d_n = 0;    // d_TV(X_2m, X_2m + 1) = 2m/n
    int summands = 0;  // X_{m+1}, ..., X_{2m}
    double bound = 0;  // embedding_coupling_bound(summands, l, p, d_n)
};
EmbeddingPlan embedding_plan(const CollectorParams& p);

// Couples S = X_{m+1} + ... + X_{2m} (a part of W, independent of the rest)
// with S + 1 through the uniform embedding; P(no meeting) bounds
// d_TV(W, W+1). Requires 2 <= m <= n/2. For n <= 400 also reports the exact
// d_TV(W, W+1).
SimResult estimate_d_tv_shift_for_waiting_time(const CollectorParams& p, const SimConfig& config);

// Laws used as baselines.
LatticePMF uniform_law(int lo, int hi);
LatticePMF uniform_sum_law(int width, int r);  // r-fold sum of uniform{1..width}
LatticePMF geometric_law(double q, double eps = 1e-15);  // on {1, 2, ...}
LatticePMF partial_sum_law(const CollectorParams& p, int j_lo, int j_hi, double eps = 1e-14);

// Chi-square goodness of fit of a histogram against a pmf; bins with
// expected count below 5 are pooled. Returns the upper-tail p-value.
double chi_square_pvalue(const Histogram& h, const LatticePMF& target);

} // namespace coupon
