#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace entstab {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitViolation = 1, kExitUsage = 2 };

struct SuiteReport;

/// check's verdict: kExitViolation when the report has violations or
/// numerical errors, else kExitOk.
int check_exit_code(const SuiteReport& r);

/// Runs one command; `args` excludes the program name. Reports go to `out`
/// unless --out is given, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace entstab
