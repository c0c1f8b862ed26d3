#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rdblow/commands.hpp"
#include "rdblow/config.hpp"
#include "rdblow/errors.hpp"

namespace fs = std::filesystem;
using namespace rdblow;

namespace {

struct Options {
  std::string command;
  std::vector<std::string> configs;
  std::optional<std::string> out_dir;
  std::optional<int> resolution;
  int jobs = 1;
};

fs::path output_dir(const Options& opt, const ExperimentConfig& cfg, const fs::path& config_path) {
  fs::path base = opt.out_dir ? fs::path(*opt.out_dir) : cfg.outputs.directory;
  if (opt.configs.size() > 1) base /= config_path.stem();
  return base;
}

int run_one(const Options& opt, const std::string& path) {
  const Command command = parse_command(opt.command);
  ExperimentConfig cfg;
  try {
    cfg = load_config(path);
  } catch (const Error& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  if (opt.resolution) cfg.domain.cells_per_axis = {*opt.resolution};

  const CommandResult result = run_command(command, cfg);
  const fs::path dir = output_dir(opt, cfg, path);
  try {
    write_outputs(result, cfg.outputs, dir);
  } catch (const std::exception& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return kExitConfig;
  }
  std::cout << path << ": " << opt.command << " exit " << result.exit_code << " -> "
            << dir.string() << "\n";
  return result.exit_code;
}

// One child process per config, at most `jobs` alive at a time. The
// overall status is the worst child status.
int run_sweep(const Options& opt) {
  int worst = 0;
  int running = 0;
  auto reap = [&] {
    int status = 0;
    if (wait(&status) > 0) {
      --running;
      const int code = WIFEXITED(status) ? WEXITSTATUS(status) : kExitNumerical;
      worst = std::max(worst, code);
    }
  };
  for (const auto& path : opt.configs) {
    while (running >= opt.jobs) reap();
    std::cout.flush();
    const pid_t pid = fork();
    if (pid < 0) {
      std::perror("fork");
      worst = std::max(worst, kExitNumerical);
      continue;
    }
    if (pid == 0) {
      const int code = run_one(opt, path);
      std::cout.flush();
      _exit(code);
    }
    ++running;
  }
  while (running > 0) reap();
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blow-up time bounds and simulations for coupled reaction-diffusion systems"};
  Options opt;
  app.add_option("command", opt.command, "check | bounds | simulate | sandwich")
      ->required()
      ->check(CLI::IsMember({"check", "bounds", "simulate", "sandwich"}));
  app.add_option("--config", opt.configs, "experiment file (repeatable)")->required();
  app.add_option("--out-dir", opt.out_dir, "output directory (overrides [outputs] directory)");
  app.add_option("--resolution", opt.resolution, "cells per axis override")
      ->check(CLI::PositiveNumber);
  app.add_option("--jobs", opt.jobs, "parallel processes for several configs")
      ->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (opt.configs.size() == 1 || opt.jobs == 1) {
    int worst = 0;
    for (const auto& path : opt.configs) worst = std::max(worst, run_one(opt, path));
    return worst;
  }
  return run_sweep(opt);
}
