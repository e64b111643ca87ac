#include "coupon/params.hpp"

#include "coupon/errors.hpp"

namespace coupon {

CollectorParams make_params(long long n, long long m) {
    if (n < 2 || n > 100'000'000)
        throw precondition_error("n must satisfy 2 <= n <= 1e8, got " + std::to_string(n));
    if (m < 0 || m > n - 1)
        throw precondition_error("m must satisfy 0 <= m <= n-1, got m=" + std::to_string(m) +
                                 " for n=" + std::to_string(n));
    return {static_cast<int>(n), static_cast<int>(m)};
}

void validate(const CollectorParams& p) { (void)make_params(p.n, p.m); }

std::string to_string(const CollectorParams& p) {
    return "(n=" + std::to_string(p.n) + ", m=" + std::to_string(p.m) + ")";
}

} // namespace coupon
