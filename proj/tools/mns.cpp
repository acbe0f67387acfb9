#include <iostream>

#include "CLI11.hpp"
#include "mns/cli.hpp"

namespace cli = mns::cli;

int main(int argc, char** argv) {
  CLI::App app{"Mollified Navier-Stokes solver on the periodic box"};
  app.require_subcommand(1);

  std::string config_path, out_dir, suite = "all", kind;
  std::uint64_t seed = 1;

  auto* solve = app.add_subcommand("solve", "Solve and write snapshots, diagnostics and a manifest");
  auto* verify = app.add_subcommand("verify", "Run property suites");
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep (gamma, alpha or nu)");
  auto* scale = app.add_subcommand("scale-check", "Initial-data scaling ratios");
  auto* pressure = app.add_subcommand("pressure", "Pressure of the initial data");
  auto* norms = app.add_subcommand("norms", "Norms of the initial data");
  for (auto* sub : {solve, sweep, scale, pressure, norms}) sub->add_option("--config", config_path, "Config file")->required();
  for (auto* sub : {solve, sweep, pressure}) sub->add_option("--out", out_dir, "Output directory (default: config output)");
  verify->add_option("--suite", suite, "helmholtz, kernels, mollifier, energy, equivalence, scaling or all");
  verify->add_option("--seed", seed, "Seed for the random-field suites");
  sweep->add_option("--kind", kind, "gamma, alpha or nu")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? cli::kOk : cli::kUsageError;
  }

  if (verify->parsed()) {
    cli::SuiteOptions opt;
    opt.seed = seed;
    return cli::cmd_verify(suite, opt, std::cout);
  }

  cli::RunConfig cfg;
  try {
    cfg = cli::load_config(config_path);
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cli::kUsageError;
  }
  const std::filesystem::path out = out_dir.empty() ? cfg.output : std::filesystem::path(out_dir);
  try {
    if (solve->parsed()) return cli::cmd_solve(cfg, out, std::cout);
    if (sweep->parsed()) return cli::cmd_sweep(cfg, kind, out, std::cout);
    if (scale->parsed()) return cli::cmd_scale_check(cfg, std::cout);
    if (pressure->parsed()) return cli::cmd_pressure(cfg, out, std::cout);
    if (norms->parsed()) return cli::cmd_norms(cfg, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kSolverFailure;
  }
  return cli::kUsageError;
}
