#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coupon::cli {

// One output record. Empty optionals are written as empty fields.
struct Row {
    std::optional<std::int64_t> n, m;
    std::string regime;
    std::string target;
    std::string metric;
    std::optional<std::int64_t> k;
    std::optional<double> value;
    std::optional<double> bound;
    std::optional<double> std_err;
    std::optional<bool> preconditions_met;
    std::string note;
    std::optional<double> runtime_ms;

    bool operator==(const Row&) const = default;
};

inline constexpr std::string_view csv_header =
    "n,m,regime,target,metric,k,value,bound,std_err,preconditions_met,note,runtime_ms";

// Shortest decimal string that parses back to the same double.
std::string format_number(double x);
double parse_number(std::string_view s);

void write_csv(std::ostream& os, const std::vector<Row>& rows);
// Throws std::runtime_error on malformed input or an unexpected header.
std::vector<Row> read_csv(std::istream& is);

} // namespace coupon::cli
