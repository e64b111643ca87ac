#include "coupon/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <boost/math/distributions/chi_squared.hpp>

#include "coupon/bounds.hpp"
#include "coupon/collector.hpp"
#include "coupon/errors.hpp"
#include "coupon/metrics.hpp"
#include "coupon/rng.hpp"

namespace coupon {

void Histogram::add(std::int64_t k) {
    if (counts.empty()) {
        offset = k;
        counts.push_back(0);
    }
    if (k < offset) {
        counts.insert(counts.begin(), static_cast<std::size_t>(offset - k), 0);
        offset = k;
    }
    const auto i = static_cast<std::size_t>(k - offset);
    if (i >= counts.size()) counts.resize(i + 1, 0);
    ++counts[i];
}

void Histogram::merge(const Histogram& other) {
    for (std::size_t i = 0; i < other.counts.size(); ++i) {
        if (other.counts[i] == 0) continue;
        const std::int64_t k = other.offset + static_cast<std::int64_t>(i);
        if (counts.empty()) {
            offset = k;
            counts.push_back(0);
        }
        if (k < offset) {
            counts.insert(counts.begin(), static_cast<std::size_t>(offset - k), 0);
            offset = k;
        }
        const auto j = static_cast<std::size_t>(k - offset);
        if (j >= counts.size()) counts.resize(j + 1, 0);
        counts[j] += other.counts[i];
    }
}

std::int64_t Histogram::total() const {
    std::int64_t s = 0;
    for (auto c : counts) s += c;
    return s;
}

namespace {

struct Tally {
    std::int64_t failures = 0;
    std::int64_t branch_hits = 0;
    Histogram first, second;

    void merge(const Tally& o) {
        failures += o.failures;
        branch_hits += o.branch_hits;
        first.merge(o.first);
        second.merge(o.second);
    }
};

// Runs body(engine, tally) for every trial; trials are split into contiguous
// chunks, one per thread, and merged in chunk order. Every trial owns its
// stream, so the result does not depend on the thread count.
template <class Body>
Tally run_trials(const SimConfig& cfg, Body body) {
    if (cfg.trials < 1) throw precondition_error("simulation: trials must be >= 1");
    int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = static_cast<int>(std::min<std::int64_t>(threads, cfg.trials));
    std::vector<Tally> parts(static_cast<std::size_t>(threads));
    auto work = [&](int c) {
        const std::int64_t lo = cfg.trials * c / threads, hi = cfg.trials * (c + 1) / threads;
        for (std::int64_t t = lo; t < hi; ++t) {
            Engine g = trial_engine(cfg.seed, static_cast<std::uint64_t>(t));
            body(g, parts[static_cast<std::size_t>(c)]);
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int c = 0; c < threads; ++c) pool.emplace_back(work, c);
        for (auto& th : pool) th.join();
    }
    Tally all;
    for (const auto& p : parts) all.merge(p);
    return all;
}

SimResult finish(const Tally& t, std::int64_t trials) {
    SimResult r;
    r.trials = trials;
    r.failures = t.failures;
    r.branch_hits = t.branch_hits;
    r.p_T_gt_r = static_cast<double>(t.failures) / static_cast<double>(trials);
    r.std_err = std::sqrt(r.p_T_gt_r * (1 - r.p_T_gt_r) / static_cast<double>(trials));
    r.first = t.first;
    r.second = t.second;
    return r;
}

// Inversion sampler for a lattice pmf.
struct Sampler {
    std::int64_t offset;
    std::vector<double> cum;

    explicit Sampler(const LatticePMF& p) : offset(p.offset), cum(p.cumulative()) {
        if (cum.empty()) throw precondition_error("sampler: empty pmf");
    }
    std::int64_t operator()(Engine& g) const {
        const double u = uniform01(g) * cum.back();
        const auto it = std::upper_bound(cum.begin(), cum.end(), u);
        const auto i = std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
        return offset + static_cast<std::int64_t>(i);
    }
};

// Geometric on {1, 2, ...} with success q, by inversion.
std::int64_t sample_geometric(Engine& g, double q) {
    if (q >= 1) return 1;
    const double u = 1.0 - uniform01(g);  // (0, 1]
    return 1 + static_cast<std::int64_t>(std::floor(std::log(u) / std::log1p(-q)));
}

} // namespace

SimResult simulate_mineka(const std::vector<LatticePMF>& step_pmfs, const SimConfig& config) {
    if (step_pmfs.empty()) throw precondition_error("simulate_mineka: need at least one step");
    for (const auto& s : step_pmfs)
        if (s.empty() || std::fabs(s.mass() + s.tail_deficit - 1) > 1e-9)
            throw precondition_error("simulate_mineka: step pmfs must be proper");
    struct Step {
        Sampler draw;
        const LatticePMF* pmf;
    };
    std::vector<Step> steps;
    for (const auto& s : step_pmfs) steps.push_back({Sampler(s), &s});
    auto tally = run_trials(config, [&](Engine& g, Tally& t) {
        std::int64_t a = 0, b = 1;  // W', W''
        bool met = false;
        for (const auto& st : steps) {
            const std::int64_t x = st.draw(g);
            std::int64_t y = x;
            if (!met) {
                const double px = st.pmf->at(x);
                const double up = 0.5 * std::min(px, st.pmf->at(x + 1)) / px;
                const double down = 0.5 * std::min(px, st.pmf->at(x - 1)) / px;
                const double u = uniform01(g);
                if (u < up) y = x + 1;
                else if (u < up + down) y = x - 1;
            }
            a += x;
            b += y;
            if (!met && a == b) met = true;
        }
        if (!met) ++t.failures;
        t.first.add(a);
        t.second.add(b - 1);
    });
    auto r = finish(tally, config.trials);
    // exact baseline when the convolution stays small
    std::size_t width = 1;
    for (const auto& s : step_pmfs) width += s.weights.size();
    if (width < 20000) {
        LatticePMF law = LatticePMF::point_mass(0);
        for (const auto& s : step_pmfs) law = convolve(law, s);
        r.exact_d_tv = d_tv_shift(law).value;
    }
    return r;
}

SimResult simulate_uniform_embedding(int l, int r, const SimConfig& config) {
    if (l < 1) throw precondition_error("simulate_uniform_embedding: l must be >= 1");
    if (r < 2) throw precondition_error("simulate_uniform_embedding: r must be >= 2");
    const auto L = static_cast<std::uint64_t>(2 * l);
    auto tally = run_trials(config, [&](Engine& g, Tally& t) {
        // V = sum U_j (target V_r); Vc = sum U''_j, the copy coupled to V + 1
        const auto u1 = static_cast<std::int64_t>(uniform_below(g, L)) + 1;
        std::int64_t V = u1, Vc;
        bool met;
        if (u1 < static_cast<std::int64_t>(L)) {
            Vc = u1 + 1;
            met = true;
            for (int j = 2; j <= r; ++j) {
                const auto u = static_cast<std::int64_t>(uniform_below(g, L)) + 1;
                V += u;
                Vc += u;
            }
        } else {
            ++t.branch_hits;
            Vc = 1;
            met = false;
            std::int64_t gap = 2 * l;  // (V + 1) - Vc
            for (int j = 2; j <= r; ++j) {
                const auto base = static_cast<std::int64_t>(uniform_below(g, static_cast<std::uint64_t>(l))) + 1;
                const bool I = bernoulli(g, 0.5);
                const std::int64_t U = base + (I ? l : 0);
                const std::int64_t Up = base + (I ? 0 : l);
                V += U;
                if (met) {
                    Vc += U;
                } else {
                    Vc += Up;
                    gap += U - Up;
                    if (gap == 0) met = true;
                }
            }
        }
        if (!met) ++t.failures;
        t.first.add(V);        // ~ V_r
        t.second.add(Vc);      // ~ V_r; equals V + 1 once met
    });
    auto res = finish(tally, config.trials);
    res.bound = uniform_coupling_bound(l, r);
    if (static_cast<long long>(r) * 2 * l < 200000) res.exact_d_tv = d_tv_shift(uniform_sum_law(2 * l, r)).value;
    return res;
}

EmbeddingPlan embedding_plan(const CollectorParams& p) {
    validate(p);
    if (p.m < 2 || 2 * p.m > p.n)
        throw precondition_error("embedding: requires 2 <= m <= n/2");
    EmbeddingPlan e;
    const int fl = p.n / p.m;
    e.l = fl % 2 == 0 ? fl : fl - 1;
    e.p = std::pow(1.0 - 2.0 * p.m / p.n, e.l) * p.m / p.n;
    e.d_n = 2.0 * p.m / p.n;
    e.summands = p.m;
    // at m = n/2 the window probability p vanishes and the bound is vacuous
    e.bound = e.p > 0 ? embedding_coupling_bound(e.summands, e.l, e.p, e.d_n)
                      : std::numeric_limits<double>::infinity();
    return e;
}

SimResult estimate_d_tv_shift_for_waiting_time(const CollectorParams& p, const SimConfig& config) {
    const auto plan = embedding_plan(p);
    const int l = plan.l, lo = p.m + 1, last = 2 * p.m;
    const double lp = l * plan.p;
    // Residual laws R_j for j = m+1..2m-1: mass on 1..l reduced by p, then
    // the geometric tail beyond l (memoryless: l + Geom).
    struct Residual {
        double q;
        std::vector<double> head_cum;  // cumulative of (P(X=k) - p)/(1 - lp), k = 1..l
    };
    std::vector<Residual> res;
    for (int j = lo; j < last; ++j) {
        const double q = static_cast<double>(j) / p.n;
        Residual r{q, {}};
        double c = 0;
        for (int k = 1; k <= l; ++k) {
            const double pk = q * std::pow(1 - q, k - 1);
            c += (pk - plan.p) / (1 - lp);
            r.head_cum.push_back(c);
        }
        res.push_back(std::move(r));
    }
    const double q_last = static_cast<double>(last) / p.n;
    auto tally = run_trials(config, [&](Engine& g, Tally& t) {
        std::int64_t common = 0;
        int count = 0;  // T = number of uniform blocks
        for (const auto& r : res) {
            if (bernoulli(g, lp)) {
                ++count;
                continue;
            }
            const double u = uniform01(g);
            const auto it = std::upper_bound(r.head_cum.begin(), r.head_cum.end(), u);
            if (it != r.head_cum.end()) common += 1 + (it - r.head_cum.begin());
            else common += l + sample_geometric(g, r.q);
        }
        const double f = count > 0 ? 2.0 / (l * std::sqrt(static_cast<double>(count))) : 1.0;
        std::int64_t a, b;  // a ~ S, b ~ S + 1
        if (f < plan.d_n) {
            // uniform coupling on {1..l} = {1..2(l/2)} for the blocks, X_2m shared
            const int half = l / 2;
            const auto u1 = static_cast<std::int64_t>(uniform_below(g, static_cast<std::uint64_t>(l))) + 1;
            std::int64_t V = u1, Vc;
            bool met = u1 < l;
            Vc = met ? u1 + 1 : 1;
            std::int64_t gap = met ? 0 : l;
            for (int j = 2; j <= count; ++j) {
                const auto base = static_cast<std::int64_t>(uniform_below(g, static_cast<std::uint64_t>(half))) + 1;
                const bool I = bernoulli(g, 0.5);
                const std::int64_t U = base + (I ? half : 0), Up = base + (I ? 0 : half);
                V += U;
                if (met) {
                    Vc += U;
                } else {
                    Vc += Up;
                    gap += U - Up;
                    if (gap == 0) met = true;
                }
            }
            const std::int64_t x = sample_geometric(g, q_last);
            a = common + Vc + x;
            b = common + V + 1 + x;
        } else {
            // uniform blocks shared; X_2m coupled maximally with X_2m + 1
            std::int64_t V = 0;
            for (int j = 0; j < count; ++j) V += static_cast<std::int64_t>(uniform_below(g, static_cast<std::uint64_t>(l))) + 1;
            std::int64_t xa, xb;
            if (bernoulli(g, q_last)) {
                xa = 1;
                xb = 1 + sample_geometric(g, q_last);
            } else {
                xa = xb = 1 + sample_geometric(g, q_last);
            }
            a = common + V + xa;
            b = common + V + xb;
        }
        if (a != b) ++t.failures;
        t.first.add(a);
        t.second.add(b - 1);
    });
    auto r = finish(tally, config.trials);
    r.bound = plan.bound;
    if (p.n <= 400) r.exact_d_tv = d_tv_shift(exact_pmf_convolution(p, 1e-13)).value;
    return r;
}

LatticePMF uniform_law(int lo, int hi) {
    if (hi < lo) throw precondition_error("uniform_law: empty range");
    LatticePMF u;
    u.offset = lo;
    u.weights.assign(static_cast<std::size_t>(hi - lo + 1), 1.0 / (hi - lo + 1));
    return u;
}

LatticePMF uniform_sum_law(int width, int r) {
    if (width < 1 || r < 0) throw precondition_error("uniform_sum_law: need width >= 1, r >= 0");
    // running-window convolution, O(r * support)
    std::vector<double> cur{1.0};
    for (int s = 0; s < r; ++s) {
        std::vector<double> next(cur.size() + static_cast<std::size_t>(width) - 1, 0.0);
        double win = 0;
        for (std::size_t i = 0; i < next.size(); ++i) {
            if (i < cur.size()) win += cur[i];
            if (i >= static_cast<std::size_t>(width)) win -= cur[i - static_cast<std::size_t>(width)];
            next[i] = win / width;
        }
        cur.swap(next);
    }
    LatticePMF out;
    out.offset = r;
    out.weights = std::move(cur);
    return out;
}

LatticePMF geometric_law(double q, double eps) {
    if (!(q > 0 && q <= 1)) throw precondition_error("geometric_law: q must lie in (0, 1]");
    LatticePMF g;
    g.offset = 1;
    double w = q, tail = 1;
    while (true) {
        g.weights.push_back(w);
        tail -= w;
        if (tail <= eps || q == 1) break;
        w *= 1 - q;
    }
    g.tail_deficit = std::max(0.0, std::pow(1 - q, static_cast<double>(g.weights.size())));
    return g;
}

LatticePMF partial_sum_law(const CollectorParams& p, int j_lo, int j_hi, double eps) {
    validate(p);
    LatticePMF law = LatticePMF::point_mass(0);
    const int count = std::max(1, j_hi - j_lo + 1);
    for (int j = j_hi; j >= j_lo; --j) law = convolve(law, geometric_law(static_cast<double>(j) / p.n, eps / count));
    return law;
}

double chi_square_pvalue(const Histogram& h, const LatticePMF& target) {
    const double N = static_cast<double>(h.total());
    if (N <= 0) throw precondition_error("chi_square_pvalue: empty histogram");
    // pool consecutive target atoms until the expected count reaches 5
    std::vector<std::pair<double, double>> bins;  // (observed, expected)
    double obs = 0, exp = 0, exp_total = 0, obs_total = 0;
    for (std::int64_t k = target.first(); k <= target.last(); ++k) {
        const auto i = k - h.offset;
        const double o = (i >= 0 && i < static_cast<std::int64_t>(h.counts.size())) ? static_cast<double>(h.counts[static_cast<std::size_t>(i)]) : 0.0;
        obs += o;
        exp += N * target.at(k);
        if (exp >= 5) {
            bins.emplace_back(obs, exp);
            obs_total += obs;
            exp_total += exp;
            obs = exp = 0;
        }
    }
    // remainder (including anything outside the target range) joins the last bin
    const double rest_obs = N - obs_total, rest_exp = N - exp_total;
    if (bins.empty() || rest_exp >= 5) {
        bins.emplace_back(rest_obs, rest_exp);
    } else {
        bins.back().first += rest_obs;
        bins.back().second += rest_exp;
    }
    if (bins.size() < 2) return 1.0;
    double stat = 0;
    for (const auto& [o, e] : bins) stat += (o - e) * (o - e) / e;
    boost::math::chi_squared_distribution<double> dist(static_cast<double>(bins.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, stat));
}

} // namespace coupon
