#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace l2approx::cli {

/**
 * Runs one command line (args[0] is the program name). CSV and JSON reports
 * go to --out or `out`; errors go to `err` as a one-line JSON object.
 * Returns 0 on success, 2 for invalid input, 3 for a violated invariant.
 */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace l2approx::cli
