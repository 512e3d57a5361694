#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace metrika::cli {

enum ExitCode : int {
  kOk = 0,
  /// `check` ran but the condition does not hold.
  kNotHolds = 1,
  kUsage = 2,
  kFileFormat = 3,
  kDomain = 4,
};

/// Runs one verb. `args` excludes the program name. Reports go to `out`,
/// diagnostics to `err`. METRIKA_SEED is read when --seed is absent.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace metrika::cli
