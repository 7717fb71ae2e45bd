#pragma once

#include <string>
#include <vector>

namespace hjhom {

// Batch front end. Exit codes: 0 success with all invariants green,
// 1 invariant violations (listed on stderr), 2 configuration errors,
// 3 solver non-convergence.
int run_cli(const std::vector<std::string>& args);

}  // namespace hjhom
