#pragma once

#include <functional>
#include <string>
#include <vector>

#include "coupon/params.hpp"

namespace coupon {

// Evaluable distribution function on the reals.
struct ContinuousCDF {
    std::string name;
    std::function<double(double)> F;
    double operator()(double x) const { return F(x); }
};

// Limit law of W/n - sum_{k>m} 1/k for fixed m. With e(x) = exp(-(x + C_m)):
//   f(x) = e^{-e} e^{m+1} / m!,  F(x) = e^{-e} sum_{j<=m} e^j / j!.
struct GumbelLike {
    int m = 0;
    double C_m = euler_gamma;

    explicit GumbelLike(int m_);

    double e(double x) const;
    double cdf(double x) const;
    double pdf(double x) const;
    double pdf_d1(double x) const;
    double pdf_d2(double x) const;
    // max_x f(x), attained where e(x) = m+1
    double pdf_max() const;
};

double gumbel_cdf(int m, double x);
double gumbel_pdf(int m, double x);
double gumbel_pdf_second_derivative(int m, double x);

// One-term correction of the Gumbel-like limit:
//   G(x) = -(1/2n) sum_{k=m+1}^{n-1} (1/k) int_{-inf}^x [f''*h_k](u) du,
// h_k the Exp(k) density. With T_k(x) = int_{-inf}^x e^{-k(x-y)} f''(y) dy the
// inner convolution is k T_k, and the outer integral is f'(x) - T_k(x), so
//   G(x)  = -(1/2n) [ H f'(x) - sum_k T_k(x)/k ],   H = sum_k 1/k,
//   G'(x) = -(1/2n) sum_k T_k(x).
// T_k is a combination of upper incomplete gammas Gamma(s, e(x)), s <= 2.
class CorrectionG {
public:
    CorrectionG(const CollectorParams& p, double quad_tol = 1e-12);

    double value(double x) const;
    double derivative(double x) const;
    // [f''*h_k](x) = k T_k(x), k = m+1..n-1
    std::vector<double> convolutions(double x) const;

    const CollectorParams& params() const { return p_; }
    double quad_tol() const { return tol_; }

private:
    std::vector<double> T(double x) const;

    CollectorParams p_;
    double tol_;
    GumbelLike g_;
    double H_;
};

double correction_G(const CollectorParams& p, double x, double quad_tol = 1e-12);
double correction_G_prime(const CollectorParams& p, double x, double quad_tol = 1e-12);

// E_n = H_n - log n - gamma: the offset between the starred (log n centred)
// and plain (H_n centred) versions. F*_{n,m}(x) = F_{n,m}(x - C_m - E_n),
// F*_m(x) = F_m(x - C_m), G*(x) = G(x - C_m - E_n).
double star_shift(const CollectorParams& p);
double star_shift(int n);

// Law of W/n - sum_{k=m+1}^n 1/k evaluated on its lattice: atom of W = w.
double lattice_atom(const CollectorParams& p, long long w);

ContinuousCDF gumbel_target(int m);
ContinuousCDF gumbel_corrected_target(const CollectorParams& p, double quad_tol = 1e-12);

} // namespace coupon
