#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace clab::cli {

/// Runs one command; args excludes the program name. Returns the exit status:
/// 0 success, 1 validation error, 2 numeric error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace clab::cli
