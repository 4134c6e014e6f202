#pragma once

#include <iosfwd>

namespace tpmlab::cli {

/// Parses argv, dispatches to one subcommand and writes one result document
/// (JSON, or CSV when a table is present and requested) to `out`.
/// Exit codes: 0 success, 2 argument error, 3 numerical-validation failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tpmlab::cli
