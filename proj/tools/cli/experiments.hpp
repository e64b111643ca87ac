#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cli/csv.hpp"
#include "coupon/params.hpp"

namespace coupon::cli {

// Approximating families a waiting-time law can be compared with.
enum class Target {
    normal,             // standardized W vs N(0,1)
    gumbel,             // W/n - sum 1/k vs the Gumbel-like limit
    gumbel_corrected,   // ... vs limit plus the 1/n correction
    poisson,            // W~ vs Po(lambda_n)
    poisson_mean,       // W~ vs Po(lambda'_n)
    poisson_corrected,  // W~ vs the two-term expansion, pointwise
    compound_poisson,   // W + c vs pi_{mu,a}
    poisson_charlier,   // W~ + c vs nu_R
    shift,              // W vs W + 1
};

std::string_view to_string(Target t);
Target parse_target(std::string_view s);  // throws std::invalid_argument
const std::vector<Target>& all_targets();

// Metrics: "d_tv", "d_k", "sup_local".
const std::vector<std::string>& supported_metrics(Target t);

struct EvalOptions {
    double tail_eps = 1e-12;
    double quad_tol = 1e-10;
    int R = 3;
    bool timing = false;
};

// One row per requested metric the target supports (all of them when
// `metrics` is empty). Throws the library's precondition/numerical errors.
std::vector<Row> evaluate(const CollectorParams& p, Target t, const std::vector<std::string>& metrics,
                          const EvalOptions& opt);

// Every bound report for (n, m), with the matching measured distance unless
// `measure` is false.
std::vector<Row> bound_rows(const CollectorParams& p, const EvalOptions& opt, bool measure);

// Moment table: mu_n, sigma2_n, lambda_n, lambda'_n and j-indexed sums.
std::vector<Row> moment_rows(const CollectorParams& p, int J);

} // namespace coupon::cli
