#pragma once

#include <iosfwd>

namespace stable_msu::cli {

/// Parses argv and runs one subcommand, writing its documented output to
/// `out` and diagnostics to `err`. Returns 0 on success, 1 when a check
/// fails and 2 on a usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stable_msu::cli
