#ifndef JOULEWIRE_RUNNER_HPP
#define JOULEWIRE_RUNNER_HPP

#include <ostream>
#include <string>

#include "joulewire/config.hpp"

namespace joulewire {

// Exit codes shared by the library-level runner and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitComputeFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitIoError = 3;

struct RunOptions {
  std::string output_dir_override;  // empty = use config
  int threads_override = -1;        // -1 = use config
  bool quiet = false;
};

// Executes the configured experiment, writes the CSV artifacts and the run
// manifest, and returns an exit code. Solver failures and invariant
// violations yield kExitComputeFailed with diagnostics in `log` and the
// manifest; I/O problems yield kExitIoError.
int run_experiment(const RunConfig& config, const std::string& config_path,
                   const RunOptions& options, std::ostream& log);

}  // namespace joulewire

#endif
