#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace semadapt {

enum ExitCode { kExitOk = 0, kExitConfig = 1, kExitRuntime = 2 };

/// Entry point behind the semadapt executable. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace semadapt
