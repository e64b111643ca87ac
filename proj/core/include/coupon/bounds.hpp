#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coupon/collector.hpp"

namespace coupon {

enum class BoundId {
    normal,              // Kolmogorov, standardized W vs N(0,1)
    poisson_upper,       // d_TV(W~, Po(lambda_n)) upper
    poisson_lower,       // ... lower
    poisson_limit,       // d_TV(W~, Po(lambda)) for a free lambda
    stein_mean,          // d_TV(W~, Po(lambda'_n)), mean matched
    uniform_coupling,    // d_TV(V_r, V_r + 1), uniform{1..2l} summands
    mineka_uniform,      // P(T > r) for the Mineka coupling, uniform{1,2}
    embedding_coupling,  // d_TV(W, W+1) through uniform embedding
    cp_order,            // d_TV(W + c, compound Poisson), order only
    pc_local_order,      // sup |mu - nu_R|, order only
    pc_tv_order,         // d_TV(mu, nu_R), order only
    pc_successive_norm,  // ||nu_{R+1} - nu_R||, order only
    structural,          // moment inequalities; value = t_0
};

std::string_view to_string(BoundId id);

struct BoundReport {
    BoundId id = BoundId::normal;
    double value = 0;               // bound, or order value when the constant is unknown
    bool explicit_constant = true;
    bool preconditions_met = true;
    std::string reason;             // why preconditions fail, or degeneracy note
    std::optional<double> measured;
    double truncation_slack = 0;
    std::string regime;

    // measured <= value + slack, when that comparison is meaningful
    bool holds() const;
};

BoundReport normal_bound(const CollectorParams& p);
BoundReport poisson_upper_bound(const CollectorParams& p);
BoundReport poisson_lower_bound(const CollectorParams& p);
BoundReport poisson_limit_bound(const CollectorParams& p, double lambda);
BoundReport stein_mean_bound(const CollectorParams& p);

double uniform_coupling_bound(int l, int r);
double mineka_uniform_bound(int r);
// 4/(l sqrt(n l p)) + 8 d_n/(n l p); l even >= 2, 0 < p, 0 <= d_n <= 1.
double embedding_coupling_bound(int n, int l, double p, double d_n);

// (1/sigma)(floor(a_{n,2})/sigma^2 + (n-m)^2/(n m)), plus the regime label.
BoundReport cp_regime_order(const CollectorParams& p);

struct PCOrders {
    BoundReport local;
    BoundReport tv;
    BoundReport successive_norm;
};
PCOrders pc_bound_orders(const CollectorParams& p, int R);

struct InequalityCheck {
    std::string name;
    double lhs = 0;
    double rhs = 0;
    bool applicable = false;
    bool holds() const { return !applicable || lhs <= rhs; }
};

struct StructuralReport {
    BoundReport report;  // value = t_0
    std::vector<InequalityCheck> checks;
    bool all_hold() const;
};

// Variance, a_{n,j} and lambda_{n,j} inequalities, exactly as stated;
// t_0 = sqrt(pi R log sqrt(m)) / sigma_n.
StructuralReport structural_checks(const CollectorParams& p, int R = 3, int J = 6);

struct RateFit {
    double exponent = 0;
    double constant = 0;
};
// Least squares of log(error) = log(constant) + exponent log(n).
RateFit fit_rate(const std::vector<double>& ns, const std::vector<double>& errors);

} // namespace coupon
