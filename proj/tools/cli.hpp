#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ecaliquot::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidation = 1;
inline constexpr int kIdentityViolation = 2;
inline constexpr int kBudgetRefusal = 3;

/// Runs the command line `args` (without the program name). Primary output goes
/// to `out`; diagnostics, resource estimates and the run manifest (unless
/// --manifest names a file) go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ecaliquot::cli
