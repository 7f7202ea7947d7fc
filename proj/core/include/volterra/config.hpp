#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "volterra/kernel.hpp"
#include "volterra/process.hpp"
#include "volterra/spectral_space.hpp"
#include "volterra/time_grid.hpp"

namespace volterra {

/// Fully resolved run description. `effective_json` is the config with every
/// default filled in; it is embedded verbatim in all output files.
struct RunConfig {
  Kernel kernel = Kernel::constant(1.0);
  SpectralSpace space;
  TimeGrid grid;
  PsiProcess psi = PsiProcess::constant_b(HilbertSchmidtOperator::identity(1));
  std::vector<double> x0;
  std::uint64_t seed = 42;
  std::size_t paths = 20000;
  std::string output_dir = ".";
  std::string effective_json;
};

/// Parses a JSON run configuration. Unknown keys are rejected; validation
/// failures name the offending key path (e.g. "grid.dt").
RunConfig parse_config(const std::string& text);

/// Convenience wrapper reading the file at `path` first.
RunConfig parse_config_file(const std::string& path);

}  // namespace volterra
