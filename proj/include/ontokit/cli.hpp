#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ontokit {

enum ExitCode : int { kExitOk = 0, kExitDiagnostics = 1, kExitUsage = 2 };

/// The `ontokit` command line. `args` excludes the program name. Machine
/// output goes to `out` (or the -o file), human messages to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ontokit
