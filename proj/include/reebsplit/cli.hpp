#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace reebsplit {

// Runs the command line tool on `args` (program name excluded) and returns
// the process exit code: 0 success or clean hypothesis failure, 1 invalid
// input, 2 verification failure, 3 internal inconsistency.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace reebsplit
