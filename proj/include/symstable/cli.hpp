#pragma once

#include <iosfwd>

namespace symstable::cli {

/// Parses argv and runs one subcommand. Payload goes to `out`, errors to
/// `err` as a one-line JSON object. Returns 0 on success, 1 on bad input,
/// 2 when the request is valid but infeasible at the given sizes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace symstable::cli
