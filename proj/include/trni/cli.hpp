#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trni {

enum ExitCode { kExitOk = 0, kExitNotEstablished = 1, kExitUsage = 2, kExitUnsupported = 3 };

/// Runs one command. `args` excludes the executable name. Reports go to
/// `out`; usage problems and diagnostics in text mode go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color = false);

}  // namespace trni
