// Command-line driver: rtstab <subcommand> --config <file> [--out dir]
// [--seed n] [--threads n]

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rtstab/config.hpp"
#include "rtstab/errors.hpp"
#include "rtstab/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Time-dependent radiative transport solver and stability checks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 0;

  for (const char* name : rtstab::kSubcommands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "key = value configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
    sub->add_option("--seed", seed, "random seed (overrides seed)");
    sub->add_option("--threads", threads, "worker threads (overrides threads)")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : rtstab::kExitConfig;
  }

  const std::string subcommand = app.get_subcommands().front()->get_name();
  const auto* sub = app.get_subcommands().front();
  try {
    rtstab::RunConfig cfg = rtstab::parse_config(config_path, subcommand);
    if (sub->count("--out")) cfg.output_dir = out_dir;
    if (sub->count("--seed")) cfg.seed = seed;
    if (sub->count("--threads")) cfg.threads = threads;
    rtstab::validate(cfg);

    const auto result = rtstab::run(cfg);
    if (result.exit_code != rtstab::kExitOk) {
      std::cerr << "rtstab " << subcommand << ": " << result.message << '\n';
    } else {
      std::cout << "rtstab " << subcommand << ": outputs in " << cfg.output_dir.string()
                << '\n';
    }
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "rtstab " << subcommand << ": " << e.what() << '\n';
    return rtstab::exit_code_for(e);
  }
}
