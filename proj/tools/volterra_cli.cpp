#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "volterra/config.hpp"
#include "volterra/runner.hpp"
#include "volterra/version.hpp"

namespace {

struct Cli {
  std::string config_path;
  std::string inline_config;
  volterra::RunOptions options;
};

void add_common(CLI::App* cmd, Cli& cli) {
  auto* file = cmd->add_option("-c,--config", cli.config_path,
                               "path to a JSON run configuration");
  cmd->add_option("--config-json", cli.inline_config,
                  "inline JSON configuration (instead of a file)")
      ->excludes(file);
  cmd->add_option("--threads", cli.options.n_threads,
                  "worker threads for path sampling");
  cmd->add_option("--paths", cli.options.paths_override,
                  "override the configured path count");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral simulator for linear stochastic Volterra equations"};
  app.set_version_flag("--version", std::string(volterra::kVersion));
  app.require_subcommand(1);

  Cli cli;

  auto* resolvent = app.add_subcommand("resolvent", "tabulate s_k(t) as CSV");
  add_common(resolvent, cli);

  auto* convergence = app.add_subcommand(
      "resolvent-convergence", "residuals at dt, dt/2, dt/4 as CSV");
  add_common(convergence, cli);

  auto* simulate =
      app.add_subcommand("simulate", "sample solution paths and moments");
  add_common(simulate, cli);
  simulate->add_option("--sample-paths", cli.options.sample_paths,
                       "number of per-path CSV files to write");
  simulate->add_flag("--dump-noise", cli.options.dump_noise,
                     "also write the raw increments of path 0");

  auto* verify =
      app.add_subcommand("verify", "residual checks of the solution notions");
  add_common(verify, cli);
  verify->add_option("--check", cli.options.check, "weak | strong | ito | chain")
      ->check(CLI::IsMember({"weak", "strong", "ito", "chain"}));
  verify->add_flag("--dt-sweep", cli.options.dt_sweep,
                   "repeat at dt, dt/2, dt/4");

  auto* estimate =
      app.add_subcommand("estimate", "Monte Carlo bound checks as CSV");
  add_common(estimate, cli);
  estimate->add_flag("--config-matrix", cli.options.config_matrix,
                     "run the kernel x mode-count default matrix");

  CLI11_PARSE(app, argc, argv);

  try {
    volterra::RunConfig config =
        !cli.config_path.empty()
            ? volterra::parse_config_file(cli.config_path)
        : !cli.inline_config.empty()
            ? volterra::parse_config(cli.inline_config)
            : volterra::parse_config("{}");
    std::string subcommand = app.get_subcommands().front()->get_name();
    return volterra::run(config, subcommand, cli.options, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
