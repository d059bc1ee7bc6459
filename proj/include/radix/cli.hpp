#pragma once

#include <iosfwd>

namespace radix {

/// Entry point of the radixsim command line. Returns 0 on success, 1 for I/O
/// or parse failures, 2 for domain errors and bad arguments.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace radix
