#pragma once

#include <iosfwd>

namespace tacshade {

/// Entry point of the `tacshade` command. Exit codes: 0 success, 1 I/O
/// failure, 2 invalid input or arguments.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tacshade
