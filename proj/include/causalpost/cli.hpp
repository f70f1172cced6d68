#pragma once

#include <iosfwd>

namespace causalpost {

/// Entry point of the `causalpost` command line tool. Subcommands:
/// simulate, fit, estimate, pitfalls, coverage. Returns the process exit
/// code; failures print a one-line diagnostic to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace causalpost
