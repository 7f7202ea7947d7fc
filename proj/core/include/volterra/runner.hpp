#pragma once

#include <iosfwd>
#include <string>

#include "volterra/config.hpp"

namespace volterra {

/// Subcommand-specific options collected from CLI flags.
struct RunOptions {
  std::string check = "chain";      // verify: weak | strong | ito | chain
  std::size_t paths_override = 0;   // 0 keeps the config value
  bool dt_sweep = false;            // verify: repeat at dt, dt/2, dt/4
  bool config_matrix = false;       // estimate: kernel x mode-count matrix
  bool dump_noise = false;          // simulate: emit raw increments (path 0)
  std::size_t sample_paths = 5;     // simulate: per-path CSVs to write
  std::size_t n_threads = 1;
};

/// Environment variable overriding RunConfig::output_dir when set.
inline constexpr const char* kOutputDirEnv = "VOLTERRA_OUTPUT_DIR";

/// Executes one subcommand (resolvent, resolvent-convergence, simulate,
/// verify, estimate), writing artifacts under the output directory. Returns
/// the process exit status: 0 iff every enabled assertion passed. Progress
/// and failure summaries go to `log`.
int run(const RunConfig& config, const std::string& subcommand,
        const RunOptions& options, std::ostream& log);

/// "%.17g" float formatting shared by every artifact writer.
std::string fmt17(double v);

}  // namespace volterra
