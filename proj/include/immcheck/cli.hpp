#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace immcheck {

/// Run the command-line front end on the given arguments (program name not
/// included). Exit codes: 0 Satisfied, 1 Violated, 2 Degenerate, 3 usage or
/// input errors.
int cli_run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace immcheck
