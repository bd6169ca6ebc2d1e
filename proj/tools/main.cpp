#include <iostream>

#include "CLI11.hpp"
#include "config.hpp"
#include "runner.hpp"

int main(int argc, char** argv) {
  using namespace hpade::cli;
  CLI::App app{"Row sequences of multipoint Hermite-Pade approximants against oracle rates"};
  app.require_subcommand(1);

  RunOptions opts;
  std::string config, output_dir, custom_dir;
  int n_max = 0;
  CLI::App* run_cmd = app.add_subcommand("run", "Run the checks of an experiment config");
  run_cmd->add_option("config", config, "Experiment config (TOML)")->required();
  CLI::Option* out_opt = run_cmd->add_option("--output-dir", output_dir, "Override the config's output_dir");
  CLI::Option* nmax_opt = run_cmd->add_option("--n-max", n_max, "Override the upper end of n_range");
  run_cmd->add_flag("--json-only", opts.json_only, "Write report.json and CSV files, no SVG plots");

  CLI::App* list_cmd = app.add_subcommand("list-examples", "List bundled experiment configs");
  CLI::Option* custom_opt = list_cmd->add_option("--examples-dir", custom_dir, "Also list configs in this directory");

  CLI11_PARSE(app, argc, argv);

  if (*run_cmd) {
    if (*out_opt) opts.output_dir = output_dir;
    if (*nmax_opt) opts.n_max = n_max;
    return run(config, opts, std::cout, std::cerr);
  }

  std::vector<std::string> warnings;
  std::optional<std::filesystem::path> custom;
  if (*custom_opt) custom = custom_dir;
  const auto entries = list_examples(HPADE_BUNDLED_CONFIGS, custom, warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& e : entries) std::cout << e.name << "\t" << e.path.string() << "\t" << e.description << "\n";
  return kPass;
}
