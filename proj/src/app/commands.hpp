#pragma once

#include <iosfwd>

namespace condreg::app {

/// Runs one command-line invocation and returns the exit status:
/// 0 on success, 1 on I/O or input-data errors, 2 on model or usage errors.
/// Errors are reported on `err` as a single line
///   condreg: error[<code>] <stage>: <message>
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace condreg::app
