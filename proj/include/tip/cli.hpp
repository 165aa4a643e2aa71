#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tip::cli {

// Runs one command-line invocation. Exit codes: 0 success, 1 property
// violated or nothing found, 2 usage error, 3 budget exceeded.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace tip::cli
