#pragma once

#include <iosfwd>

namespace homog::cli {

/// Runs one subcommand. Exit codes: 0 success/confirmed, 1 configuration
/// or input error, 2 refuted, 3 inconclusive.
int dispatch(int argc, char** argv, std::ostream& out, std::ostream& err);
int dispatch(int argc, char** argv);

}  // namespace homog::cli
