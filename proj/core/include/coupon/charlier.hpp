#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "coupon/collector.hpp"
#include "coupon/lattice.hpp"

namespace coupon {

// Two readings of the Charlier polynomial C_r(j, lambda) = sum_k C(r,k) C(j,k) k! z^k:
//   as_printed: z = lambda^{-2}
//   classical:  z = (-lambda)^{-1}   (orthogonal for the Po(lambda) weight)
enum class CharlierForm { as_printed, classical };

// Two ways of attaching the coefficients a~_r to C_r:
//   alternating: Po{j} * sum_{r>=0} (-1)^r a~_r C_r(j)
//   leading_one: Po{j} * (1 + sum_{r>=1} (-1)^{r+1} a~_r C_r(j))
enum class CharlierSign { alternating, leading_one };

double charlier_polynomial(int r, std::int64_t j, double lambda, CharlierForm form = CharlierForm::as_printed);

// Which expansion applies: a_{n,2} > 1 (translate by floor(a_{n,2}), H_R
// truncated at power R) or a_{n,2} < 1 (no translation, power 3R-2).
enum class PCRegime { a2_large, a2_small };
std::string_view to_string(PCRegime r);

struct PoissonCharlierMeasure {
    double lambda = 0;  // sigma_n^2
    int R = 3;
    PCRegime regime = PCRegime::a2_large;
    std::vector<double> coeffs;  // a~^(0..D); a~^(0) = 1
    std::int64_t c = 0;          // the measure approximates W~ + c

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

// Coefficients of h_R(w), index 0..R (index 0 is 0).
std::vector<double> h_R_coefficients(const MomentSummary& s, int R, PCRegime regime);

// Coefficients of sum_{l=0}^{L} h^l / l!, degree L * (h.size()-1).
template <class T>
std::vector<T> exp_truncated(const std::vector<T>& h, int L) {
    const std::size_t deg = h.size() - 1;
    std::vector<T> total(deg * static_cast<std::size_t>(L) + 1, T(0));
    std::vector<T> term{T(1)};
    total[0] = T(1);
    for (int l = 1; l <= L; ++l) {
        std::vector<T> next(term.size() + deg, T(0));
        for (std::size_t i = 0; i < term.size(); ++i) {
            if (term[i] == T(0)) continue;
            for (std::size_t j = 1; j <= deg; ++j) next[i + j] += term[i] * h[j];
        }
        for (auto& x : next) x /= T(l);
        for (std::size_t i = 0; i < next.size(); ++i) total[i] += next[i];
        term.swap(next);
    }
    return total;
}

int pc_truncation_power(int R, PCRegime regime);  // L
int pc_nominal_degree(int R, PCRegime regime);    // R^2 or 3R^2 - R

// Signed measure sum_r a~_r Delta^r Po(lambda) on [lo, hi], with
// Delta p{j} = p{j-1} - p{j}; computed by Horner in extended precision.
// Reference only: differencing loses all accuracy once the degree is
// past ~10 at moderate lambda.
SignedLatticeMeasure pc_difference_form(double lambda, const std::vector<double>& coeffs, std::int64_t lo,
                                        std::int64_t hi);
// The same measure through Charlier polynomials under a chosen convention.
SignedLatticeMeasure pc_charlier_form(double lambda, const std::vector<double>& coeffs, std::int64_t lo,
                                      std::int64_t hi, CharlierForm form, CharlierSign sign);

struct PoissonCharlierResult {
    PoissonCharlierMeasure measure;
    SignedLatticeMeasure nu;
};

// nu is evaluated through the classical Charlier recurrence.
// support_hint: half-width of the emitted range in standard deviations.
PoissonCharlierResult build_poisson_charlier(const CollectorParams& p, int R, int support_hint = 12);

} // namespace coupon
