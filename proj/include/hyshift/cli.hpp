#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hyshift {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUndecided = 2;

// Runs one command; args excludes the program name. The report goes to `out`
// (or to --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyshift
