#pragma once

#include <iosfwd>

namespace grpcli {

enum ExitCode {
  kExitOk = 0,
  kExitFailure = 1,  // I/O, configuration, or a malformed record
  kExitDegraded = 2, // some record was repaired or rejected by the parser
};

// Entry point of the grpscore tool. Reads standard input from `in` when no
// input file is named; writes results to `out` unless -o is given.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace grpcli
