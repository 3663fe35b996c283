#pragma once

#include <iosfwd>

namespace fluidair {

/// Subcommands `run`, `trace` and `check`. Returns 0 on success, 1 on
/// runtime errors or failed checks, 2 on usage errors.
int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace fluidair
