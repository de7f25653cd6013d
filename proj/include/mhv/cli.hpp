#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mhv {

/// Runs one `mhv` subcommand; args excludes the program name. Returns the
/// exit status: 0 success or accept, 1 reject or non-member, 2 usage or
/// validation error.
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mhv
