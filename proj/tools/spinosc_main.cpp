#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spinosc/experiment.hpp"

#ifndef SPINOSC_CONFIG_DIR
#define SPINOSC_CONFIG_DIR "configs"
#endif

namespace {

struct ExperimentInfo {
  const char* name;
  const char* description;
};

constexpr ExperimentInfo kExperiments[] = {
    {"fig1a", "harmonic run, ground state: no oscillation"},
    {"fig1b", "harmonic run, 0 + i 2 superposition: 2 Omega oscillation"},
    {"fig1c", "harmonic run, full superposition: Omega lines on spin 2"},
    {"fig1d", "harmonic run, full superposition: Omega and 3 Omega on spin 1"},
    {"fig2", "driven anharmonic run, ground state: Rabi oscillation"},
    {"fig2_state2", "driven anharmonic run, level 2: frozen populations"},
    {"fig2_relax", "driven anharmonic run with T2 decay"},
    {"binary_n2", "coupling-free closed form check, 2 spins"},
    {"binary_n3", "coupling-free closed form check, 3 spins"},
    {"binary_n4", "coupling-free closed form check, 4 spins"},
};

std::string output_dir(const std::string& flag_value) {
  if (const char* env = std::getenv("SPINOSC_OUTPUT_DIR"); env && *env)
    return env;
  return flag_value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinosc: desk-scale simulator of a two-spin NMR processor "
               "running truncated-oscillator quantum simulations"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_flag = "out";
  auto* run = app.add_subcommand("run", "run one experiment config");
  run->add_option("config", config_path, "path to a .cfg experiment file")
      ->required();
  run->add_option("--out", out_flag,
                  "output directory (SPINOSC_OUTPUT_DIR overrides)");

  std::string verify_configs = SPINOSC_CONFIG_DIR;
  auto* verify = app.add_subcommand("verify", "run the full verification suite");
  verify->add_option("--configs", verify_configs,
                     "directory holding the shipped canonical configs");

  auto* list = app.add_subcommand("list-experiments",
                                  "list the shipped canonical experiments");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      spinosc::ExperimentConfig cfg = spinosc::parse_config_file(config_path);
      spinosc::RunResult result =
          spinosc::run_experiment(cfg, output_dir(out_flag));
      std::cout << "experiment: " << cfg.label << "\n" << result.summary;
      for (const auto& f : result.files) std::cout << "wrote " << f << "\n";
      return result.ok ? 0 : 1;
    }
    if (verify->parsed()) {
      auto results = spinosc::verify_all(verify_configs);
      int failures = 0;
      for (const auto& r : results) {
        std::printf("[%2d] %s  %s\n      %s\n", r.id,
                    r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        if (!r.pass) ++failures;
      }
      std::printf("%zu criteria, %d failed\n", results.size(), failures);
      return failures == 0 ? 0 : 1;
    }
    if (list->parsed()) {
      for (const auto& e : kExperiments)
        std::printf("%-12s %s\n", e.name, e.description);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
