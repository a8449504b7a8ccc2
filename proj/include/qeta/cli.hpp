#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qeta/report.hpp"

namespace qeta {

/// One JSON object (no trailing newline) in the documented report schema.
std::string report_to_json(const VerificationReport& report);

/// Exit code for a batch: 0 all pass, 1 any failure, 2 any error.
int exit_code_for(const std::vector<VerificationReport>& reports);

/// Command-line entry point. args[0] is the program name. Reports go to
/// `out` (text, or JSON Lines under --json); diagnostics go to `err`.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qeta
