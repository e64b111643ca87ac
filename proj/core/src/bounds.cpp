#include "coupon/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "coupon/errors.hpp"

namespace coupon {

std::string_view to_string(BoundId id) {
    switch (id) {
    case BoundId::normal: return "normal";
    case BoundId::poisson_upper: return "poisson_upper";
    case BoundId::poisson_lower: return "poisson_lower";
    case BoundId::poisson_limit: return "poisson_limit";
    case BoundId::stein_mean: return "stein_mean";
    case BoundId::uniform_coupling: return "uniform_coupling";
    case BoundId::mineka_uniform: return "mineka_uniform";
    case BoundId::embedding_coupling: return "embedding_coupling";
    case BoundId::cp_order: return "cp_order";
    case BoundId::pc_local_order: return "pc_local_order";
    case BoundId::pc_tv_order: return "pc_tv_order";
    case BoundId::pc_successive_norm: return "pc_successive_norm";
    case BoundId::structural: return "structural";
    }
    return "?";
}

bool BoundReport::holds() const {
    if (!measured || !preconditions_met || !explicit_constant) return true;
    return *measured <= value + truncation_slack;
}

namespace {

BoundReport make(BoundId id, const CollectorParams& p, const MomentSummary& s) {
    BoundReport r;
    r.id = id;
    r.regime = std::string(to_string(classify_regime(p, s)));
    return r;
}

} // namespace

BoundReport normal_bound(const CollectorParams& p) {
    validate(p);
    const auto s = moments(p, 2);
    auto r = make(BoundId::normal, p, s);
    if (p.n < 3 || p.m < 1 || p.m > p.n - 2) {
        r.preconditions_met = false;
        r.reason = "requires n >= 3 and 1 <= m <= n-2";
        r.value = std::numeric_limits<double>::infinity();
        if (p.m == p.n - 1) r.value = 0;  // degenerate: no randomness to standardize
        return r;
    }
    r.value = 9.257 * (static_cast<double>(p.n) / p.m) / s.sigma_n();
    return r;
}

BoundReport poisson_upper_bound(const CollectorParams& p) {
    validate(p);
    const auto s = moments(p, 2);
    auto r = make(BoundId::poisson_upper, p, s);
    r.value = 2 * s.lambda(2);
    return r;
}

BoundReport poisson_lower_bound(const CollectorParams& p) {
    validate(p);
    const auto s = moments(p, 2);
    auto r = make(BoundId::poisson_lower, p, s);
    long double prod = 1;
    for (int i = p.m + 1; i <= p.n; ++i) prod *= static_cast<long double>(i) / p.n;
    r.value = static_cast<double>(prod) * s.lambda(2) / 5;
    if (4LL * (p.m + 1) < 3LL * p.n) {
        r.preconditions_met = false;
        r.reason = "requires min i/n = (m+1)/n >= 3/4";
    }
    return r;
}

BoundReport poisson_limit_bound(const CollectorParams& p, double lambda) {
    validate(p);
    if (!(lambda >= 0)) throw precondition_error("poisson_limit_bound: lambda must be >= 0");
    const auto s = moments(p, 2);
    auto r = make(BoundId::poisson_limit, p, s);
    r.value = 2 * s.lambda(2) + std::fabs(s.lambda_n - lambda);
    return r;
}

BoundReport stein_mean_bound(const CollectorParams& p) {
    validate(p);
    const auto s = moments(p, 3);
    auto r = make(BoundId::stein_mean, p, s);
    const double lp = s.lambda_prime_n;
    if (!(lp > 0)) {
        r.value = 0;
        r.preconditions_met = false;
        r.reason = "degenerate: lambda'_n = 0, W~ = 0 almost surely";
        return r;
    }
    r.value = 8 * std::min(1.0, std::sqrt(2 / (std::numbers::e * lp))) * s.a(3);
    return r;
}

double uniform_coupling_bound(int l, int r) {
    if (l < 1 || r < 1) throw precondition_error("uniform_coupling_bound: l and r must be >= 1");
    return 1.0 / (l * std::sqrt(static_cast<double>(r)));
}

double mineka_uniform_bound(int r) {
    if (r < 1) throw precondition_error("mineka_uniform_bound: r must be >= 1");
    return 1.0 / std::sqrt(2.0 * r);
}

double embedding_coupling_bound(int n, int l, double p, double d_n) {
    if (n < 1) throw precondition_error("embedding_coupling_bound: n must be >= 1");
    if (l < 2 || l % 2 != 0) throw precondition_error("embedding_coupling_bound: l must be even and >= 2");
    if (!(p > 0)) throw precondition_error("embedding_coupling_bound: p must be > 0");
    if (!(d_n >= 0 && d_n <= 1)) throw precondition_error("embedding_coupling_bound: d_n must lie in [0, 1]");
    const double nlp = static_cast<double>(n) * l * p;
    return 4 / (l * std::sqrt(nlp)) + 8 * d_n / nlp;
}

BoundReport cp_regime_order(const CollectorParams& p) {
    validate(p);
    const auto s = moments(p, 2);
    auto r = make(BoundId::cp_order, p, s);
    r.explicit_constant = false;
    if (p.m < 2 || p.m > p.n - 4) {
        r.preconditions_met = false;
        r.reason = "requires 2 <= m <= n-4";
    }
    if (!(s.sigma2_n > 0)) {
        r.value = 0;  // m = n-1: W is the constant 1
        r.reason = "degenerate: sigma_n = 0";
        return r;
    }
    if (p.m == 0) {
        r.value = std::numeric_limits<double>::infinity();
        return r;
    }
    const double sig = s.sigma_n();
    const double d = p.n - p.m;
    r.value = (std::floor(s.a(2)) / s.sigma2_n + d * d / (static_cast<double>(p.n) * p.m)) / sig;
    return r;
}

PCOrders pc_bound_orders(const CollectorParams& p, int R) {
    validate(p);
    if (R < 3) throw precondition_error("pc_bound_orders: R must be >= 3");
    const auto s = moments(p, 2);
    PCOrders o;
    o.local = make(BoundId::pc_local_order, p, s);
    o.tv = make(BoundId::pc_tv_order, p, s);
    o.successive_norm = make(BoundId::pc_successive_norm, p, s);
    for (auto* b : {&o.local, &o.tv, &o.successive_norm}) b->explicit_constant = false;
    const double n = p.n, m = p.m, d = p.n - p.m;
    const double sig = s.sigma_n();
    const bool large = s.a(2) > 1;
    auto fail = [&](const std::string& why) {
        for (auto* b : {&o.local, &o.tv, &o.successive_norm}) {
            b->preconditions_met = false;
            b->reason = why;
            b->value = std::numeric_limits<double>::infinity();
        }
    };
    if (!(s.sigma2_n > 0)) {
        fail("degenerate: sigma_n = 0");
        for (auto* b : {&o.local, &o.tv, &o.successive_norm}) b->value = 0;
        return o;
    }
    if (large) {
        if (2 * p.m <= p.n - 2) {
            if (p.m < 1) {
                fail("requires m >= 1");
                return o;
            }
            o.local.value = std::pow(m, -R / 2.0);
            o.tv.value = sig * std::log(sig) * std::pow(m, -R / 2.0);
            o.successive_norm.value = std::pow(m, -(R - 1) / 2.0);
        } else if (2 * p.m >= p.n) {
            o.local.value = std::pow(n, (R - 2) / 2.0) / std::pow(d, R - 1);
            o.tv.value = std::pow(n, (R - 3) / 2.0) / std::pow(d, R - 2);
            o.successive_norm.value = o.tv.value;
        } else {
            fail("m = (n-1)/2 lies between the two stated ranges");
        }
    } else {
        o.local.value = std::pow(n, -R / 2.0);
        o.tv.value = d / std::pow(n, (R + 1) / 2.0);
        o.successive_norm.value = o.tv.value;
    }
    return o;
}

bool StructuralReport::all_hold() const {
    for (const auto& c : checks)
        if (!c.holds()) return false;
    return true;
}

StructuralReport structural_checks(const CollectorParams& p, int R, int J) {
    validate(p);
    if (R < 3) throw precondition_error("structural_checks: R must be >= 3");
    J = std::max(J, 2);
    const auto s = moments(p, J);
    StructuralReport out;
    out.report = make(BoundId::structural, p, s);
    const double n = p.n, m = p.m, d = p.n - p.m;
    const bool var_ok = p.m >= 1 && p.n - p.m >= 2;
    const bool lower_half = 2.0 * m <= n - 2;  // m <= n/2 - 1
    const bool upper_half = 2.0 * m >= n;      // m >= n/2
    auto add = [&](std::string name, double lhs, double rhs, bool applicable) {
        out.checks.push_back({std::move(name), lhs, rhs, applicable});
    };
    add("sigma2 >= n^2/(20m)", var_ok && lower_half ? n * n / (20 * m) : 0, s.sigma2_n, var_ok && lower_half);
    add("sigma2 <= n^2/m", s.sigma2_n, var_ok && lower_half ? n * n / m : 0, var_ok && lower_half);
    add("sigma2 >= (n-m)^2/(24n)", d * d / (24 * n), s.sigma2_n, var_ok && upper_half);
    add("sigma2 <= 2(n-m)^2/n", s.sigma2_n, 2 * d * d / n, var_ok && upper_half);
    add("a2 >= (n-m-1)^3/(3n^2)", std::pow(d - 1, 3) / (3 * n * n), s.a(2), true);
    add("a2 <= (n-m)^3/m^2", s.a(2), p.m >= 1 ? std::pow(d, 3) / (m * m) : 0, p.m >= 1);
    for (int j = 2; j <= J; ++j) {
        add("a" + std::to_string(j) + " <= 2^j n^j/m^(j-1)", s.a(j),
            p.m >= 1 ? std::pow(2 * n, j) / std::pow(m, j - 1) : 0, p.m >= 1 && lower_half);
        add("a" + std::to_string(j) + " <= 2^j (n-m)^(j+1)/n^j", s.a(j), std::pow(2.0, j) * std::pow(d, j + 1) / std::pow(n, j),
            2.0 * m >= n - 2);
    }
    for (int j = 2; j <= J; ++j) {
        add("lambda" + std::to_string(j) + " <= lambda (2 lambda/n)^((j-1)/2)", s.lambda(j),
            s.lambda_n * std::pow(2 * s.lambda_n / n, (j - 1) / 2.0), p.n - p.m >= 2);
    }
    auto& r = out.report;
    r.explicit_constant = false;
    if (p.m >= 1 && s.sigma2_n > 0) {
        r.value = std::sqrt(std::numbers::pi * R * std::log(std::sqrt(m))) / s.sigma_n();
    } else {
        r.preconditions_met = false;
        r.reason = "t_0 requires m >= 1 and sigma_n > 0";
        r.value = 0;
    }
    if (!out.all_hold()) {
        for (const auto& c : out.checks)
            if (!c.holds()) r.reason += (r.reason.empty() ? "" : "; ") + ("violated: " + c.name);
    }
    return out;
}

RateFit fit_rate(const std::vector<double>& ns, const std::vector<double>& errors) {
    if (ns.size() != errors.size()) throw precondition_error("fit_rate: lengths differ");
    if (ns.size() < 4) throw precondition_error("fit_rate: need at least 4 points");
    for (std::size_t i = 0; i < ns.size(); ++i)
        if (!(ns[i] > 0) || !(errors[i] > 0)) throw precondition_error("fit_rate: inputs must be positive");
    const double k = static_cast<double>(ns.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double x = std::log(ns[i]), y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double den = k * sxx - sx * sx;
    if (!(std::fabs(den) > 0)) throw precondition_error("fit_rate: abscissae must not all coincide");
    RateFit f;
    f.exponent = (k * sxy - sx * sy) / den;
    f.constant = std::exp((sy - f.exponent * sx) / k);
    return f;
}

} // namespace coupon
