#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace coupon::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_args = 1,          // unparseable arguments, unknown names, unwritable output
    exit_precondition = 2,  // a (n, m) or target precondition failed; reported in the CSV
    exit_numerical = 3,     // quadrature / continued fraction / mass checks failed
};

// Runs one subcommand. `args` excludes the program name. CSV goes to --out
// (or `out` when absent), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Threads used when --threads is not given: $COUPON_LAB_THREADS, else 1.
int default_threads();

} // namespace coupon::cli
