#pragma once

#include <iosfwd>

namespace sle::cli {

/// Runs the `sle` command line. Returns the process exit code: 0 success,
/// 2 usage, 3 numerical, 4 resource budget.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sle::cli
