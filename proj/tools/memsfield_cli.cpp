// Command-line driver for the two-layer transmission solver and its
// diagnostics studies. All numeric behavior lives in the core library; this
// file only parses flags and dispatches.

#include <iostream>

#include <CLI11.hpp>

#include "memsfield/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"memsfield: two-layer MEMS transmission-problem solver"};
  app.require_subcommand(1);
  app.fallthrough();  // allow global flags after the subcommand name

  std::string config_path;
  std::string out_override;
  int threads = 1;
  int seed = 0;  // reserved; no stochastic components currently

  app.add_option("--config", config_path, "configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_override, "output directory override");
  app.add_option("--threads", threads, "worker threads (solver is serial)");
  app.add_option("--seed", seed, "reserved");

  const char* commands[] = {"admissible",   "solve",
                            "verify",       "refine-study",
                            "stability-study", "kappa-study"};
  for (const char* c : commands) app.add_subcommand(c);

  CLI11_PARSE(app, argc, argv);

  memsfield::RunConfig cfg;
  try {
    cfg = memsfield::load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return memsfield::kMalformedInput;
  }
  if (!out_override.empty()) cfg.out_dir = out_override;

  const std::string cmd = app.get_subcommands().front()->get_name();
  return memsfield::run_command(cmd, cfg, std::cerr);
}
