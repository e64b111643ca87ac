#pragma once

#include <cstdint>
#include <string>

namespace coupon {

// Euler's constant to 30 significant digits.
inline constexpr double euler_gamma = 0.577215664901532860606512090082;

// Draws from n coupons until all but m have been seen.
struct CollectorParams {
    int n = 2;
    int m = 0;

    int needed() const { return n - m; }
    bool operator==(const CollectorParams&) const = default;
};

// Throws precondition_error unless n >= 2 and 0 <= m <= n-1.
CollectorParams make_params(long long n, long long m);
void validate(const CollectorParams& p);

std::string to_string(const CollectorParams& p);

} // namespace coupon
