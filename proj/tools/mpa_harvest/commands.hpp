#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"
#include "tables.hpp"

namespace mpa::cli {

std::vector<Table> cmd_bifurcation(const RunConfig& config);
std::vector<Table> cmd_compare(const RunConfig& config);
std::vector<Table> cmd_simulate_years(const RunConfig& config);
std::vector<Table> cmd_sweep(const RunConfig& config);

/// Entry point behind the executable. Returns the process exit code:
/// 0 on success, 2 for configuration errors, 3 for numerical failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mpa::cli
