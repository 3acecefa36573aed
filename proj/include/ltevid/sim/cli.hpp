#pragma once

#include <iosfwd>

namespace ltevid::sim {

/// Exit codes: 0 success, 1 unexpected failure, 2 usage or configuration
/// error, 3 I/O error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ltevid::sim
