#include "cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <system_error>

namespace coupon::cli {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) throw std::runtime_error("format_number: to_chars failed");
    return std::string(buf, end);
}

double parse_number(std::string_view s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    double x = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc{} || end != s.data() + s.size())
        throw std::runtime_error("csv: bad number '" + std::string(s) + "'");
    return x;
}

namespace {

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

template <class T>
std::string field(const std::optional<T>& v) {
    if (!v) return {};
    if constexpr (std::is_same_v<T, bool>)
        return *v ? "true" : "false";
    else if constexpr (std::is_same_v<T, double>)
        return format_number(*v);
    else
        return std::to_string(*v);
}

std::optional<std::int64_t> to_int(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::int64_t x = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc{} || end != s.data() + s.size()) throw std::runtime_error("csv: bad integer '" + s + "'");
    return x;
}

std::optional<double> to_real(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return parse_number(s);
}

std::optional<bool> to_bool(const std::string& s) {
    if (s.empty()) return std::nullopt;
    if (s == "true") return true;
    if (s == "false") return false;
    throw std::runtime_error("csv: bad flag '" + s + "'");
}

// Splits one record; handles quoted fields spanning lines.
bool next_record(std::istream& is, std::vector<std::string>& out) {
    out.clear();
    std::string cur;
    bool in_quotes = false, any = false;
    for (int ch; (ch = is.get()) != EOF;) {
        any = true;
        const char c = static_cast<char>(ch);
        if (in_quotes) {
            if (c == '"') {
                if (is.peek() == '"') {
                    cur += '"';
                    is.get();
                } else {
                    in_quotes = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c == '\n') {
            out.push_back(std::move(cur));
            return true;
        } else if (c != '\r') {
            cur += c;
        }
    }
    if (in_quotes) throw std::runtime_error("csv: unterminated quote");
    if (!any) return false;
    out.push_back(std::move(cur));
    return true;
}

} // namespace

void write_csv(std::ostream& os, const std::vector<Row>& rows) {
    os << csv_header << '\n';
    for (const auto& r : rows) {
        os << field(r.n) << ',' << field(r.m) << ',' << quote(r.regime) << ',' << quote(r.target) << ','
           << quote(r.metric) << ',' << field(r.k) << ',' << field(r.value) << ',' << field(r.bound) << ','
           << field(r.std_err) << ',' << field(r.preconditions_met) << ',' << quote(r.note) << ','
           << field(r.runtime_ms) << '\n';
    }
}

std::vector<Row> read_csv(std::istream& is) {
    std::vector<std::string> f;
    if (!next_record(is, f)) throw std::runtime_error("csv: empty input");
    std::string header;
    for (std::size_t i = 0; i < f.size(); ++i) header += (i ? "," : "") + f[i];
    if (header != csv_header) throw std::runtime_error("csv: unexpected header");

    std::vector<Row> rows;
    while (next_record(is, f)) {
        if (f.size() == 1 && f[0].empty()) continue;
        if (f.size() != 12) throw std::runtime_error("csv: expected 12 fields, got " + std::to_string(f.size()));
        Row r;
        r.n = to_int(f[0]);
        r.m = to_int(f[1]);
        r.regime = f[2];
        r.target = f[3];
        r.metric = f[4];
        r.k = to_int(f[5]);
        r.value = to_real(f[6]);
        r.bound = to_real(f[7]);
        r.std_err = to_real(f[8]);
        r.preconditions_met = to_bool(f[9]);
        r.note = f[10];
        r.runtime_ms = to_real(f[11]);
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace coupon::cli
