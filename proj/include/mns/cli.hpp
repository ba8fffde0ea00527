#pragma once

#include <string>

namespace mns {

// Subcommand entry points; return process exit codes:
//   0 pass, 1 identity/tolerance failure, 2 config error, 3 numerical abort.

int cmd_run(const std::string& config_path, const std::string& out_override,
            bool verbose);
int cmd_check(const std::string& config_path, const std::string& out_override,
              bool verbose);
int cmd_rhs_compare(const std::string& config_path, bool verbose);
int cmd_derivative_audit(const std::string& config_path, bool verbose);

}  // namespace mns
