#pragma once

#include <iosfwd>

namespace upm::cli {

// Runs the command line tool; returns the process exit status. Normal output
// goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace upm::cli
