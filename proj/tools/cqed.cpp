// cqed: run one named experiment and write its artifacts.
//
//   cqed <experiment> [--config file.json] [--seed N] [--out dir] [--dim D]
//
// Exit codes: 0 ok, 1 invalid config, 2 numerical failure, 3 selfcheck failure.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "cqed/experiments.hpp"
#include "cqed/io.hpp"

namespace ex = cqed::experiments;

int main(int argc, char** argv) {
  CLI::App app{"Cavity field state preparation, decoherence and Wigner-function measurement"};
  app.set_version_flag("--version", std::string(CQED_VERSION));
  app.require_subcommand(1, 1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  int dim = 0;
  for (const auto& name : ex::names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master random seed");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--dim", dim, "Fock-space truncation override")->check(CLI::NonNegativeNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  CLI::App* sub = app.get_subcommands().front();

  ex::ExperimentConfig config;
  try {
    if (!config_path.empty()) config = ex::parse_config(cqed::io::read_file(config_path));
    if (!config.experiment.empty() && config.experiment != sub->get_name()) {
      throw cqed::ConfigError("config names experiment '" + config.experiment + "' but '" + sub->get_name() +
                              "' was requested");
    }
    config.experiment = sub->get_name();
    if (sub->count("--seed")) config.seed = seed;
    if (sub->count("--out")) config.out = out_dir;
    if (sub->count("--dim")) config.dim = dim;
    ex::validate(config);
  } catch (const cqed::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  try {
    const ex::RunResult result = ex::run(config);
    for (const auto& line : result.messages) std::printf("%s\n", line.c_str());
    for (const auto& a : result.artifacts) {
      std::printf("wrote %s (%zu bytes, fnv1a64 %s)\n", (config.out / a.file).string().c_str(), a.bytes,
                  a.checksum.c_str());
    }
    return result.exit_code;
  } catch (const cqed::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  }
}
