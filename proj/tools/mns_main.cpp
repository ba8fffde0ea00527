#include <string>

#include <CLI11.hpp>

#include "mns/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"mns: metriplectic simulator for the compressible "
               "Navier-Stokes equations"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool verbose = false;

  auto add_common = [&](CLI::App* cmd, bool with_out) {
    cmd->add_option("--config", config_path, "config file (JSON)")
        ->required();
    if (with_out)
      cmd->add_option("--out", out_dir, "output directory override");
    cmd->add_flag("--verbose", verbose, "more output");
  };

  CLI::App* run = app.add_subcommand(
      "run", "integrate the configured problem; write diagnostics + snapshots");
  add_common(run, true);
  CLI::App* check = app.add_subcommand(
      "check", "run the bracket/invariant verification suite");
  add_common(check, true);
  CLI::App* rhs = app.add_subcommand(
      "rhs-compare", "bracket dynamics vs the direct Navier-Stokes oracle");
  add_common(rhs, false);
  CLI::App* audit = app.add_subcommand(
      "derivative-audit", "directional-derivative audit of all functionals");
  add_common(audit, false);

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return mns::cmd_run(config_path, out_dir, verbose);
  if (check->parsed()) return mns::cmd_check(config_path, out_dir, verbose);
  if (rhs->parsed()) return mns::cmd_rhs_compare(config_path, verbose);
  return mns::cmd_derivative_audit(config_path, verbose);
}
