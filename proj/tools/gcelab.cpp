#include <iostream>

#include <CLI11.hpp>

#include "gcelab/cli.h"
#include "gcelab/errors.h"
#include "gcelab/io.h"

int main(int argc, char** argv) {
  gcelab::RunConfig cfg;
  std::string grid, critical, config;
  double tol = 0;

  CLI::App app{"Numerical lab for Δu = |H|^2 e^{2u} on the unit disk"};
  app.require_subcommand(1);
  for (const char* name : {"solve", "canonical", "heins", "maximal", "verify", "lp"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "problem JSON");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--tol", tol, "tolerance override");
    sub->add_option("--seed", cfg.seed, "seed for randomized suites");
    sub->add_option("--grid", grid, "grid override NRxNT");
    if (std::string(name) == "heins") sub->add_option("--critical", critical, "critical points, e.g. \"0.4+0i,-0.2i\"");
    if (std::string(name) == "verify") sub->add_option("--suite", cfg.suite, "disk, blaschke, gce, canonical or all");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return gcelab::kExitInvalid;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  auto* sub = app.get_subcommands().front();
  if (!config.empty()) cfg.config_path = config;
  if (sub->count("--tol")) cfg.tol = tol;
  if (!critical.empty() || (sub->get_name() == "heins" && sub->count("--critical"))) cfg.critical = critical;
  if (!grid.empty()) {
    try {
      cfg.grid = gcelab::io::parse_grid(grid);
    } catch (const gcelab::InvalidInput& e) {
      std::cerr << "invalid input: " << e.what() << "\n";
      return gcelab::kExitInvalid;
    }
  }
  return gcelab::run(cfg, std::cerr);
}
