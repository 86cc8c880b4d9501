#pragma once

#include <iosfwd>

namespace cpca::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,      // bad flags or parameter values
  kIo = 3,         // file could not be read or written
  kData = 4,       // malformed CSV, corrupt state, dimension mismatch
  kNumerical = 5,  // a numerical routine failed
};

/// Entry point for the `cpca` tool with injectable streams. `in` feeds
/// `incremental` when points are read from standard input.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace cpca::cli
