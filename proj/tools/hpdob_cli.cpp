// Command-line front end for the disturbance observer simulator.
//
//   hpdob run      --config cfg.json --out results/
//   hpdob sweep    --config cfg.json --param g --values 0.15,0.25,0.35 --out sweep/
//   hpdob compare  --config a.json --config b.json --out cmp/
//   hpdob validate
//   hpdob defaults          (prints the fully resolved default config)

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hpdob/commands.hpp"
#include "hpdob/config.hpp"

namespace {

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::string plant_model;

  hpdob::RunOverrides overrides() const {
    hpdob::RunOverrides o;
    o.seed = seed;
    if (!plant_model.empty()) o.plant_model = hpdob::parse_plant_model(plant_model);
    return o;
  }
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--seed", flags.seed, "Override the measurement-noise seed");
  cmd->add_option("--plant-model", flags.plant_model, "Plant model used for the run")
      ->check(CLI::IsMember({"continuous-truth", "pure-discrete"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-time disturbance observer simulator"};
  app.require_subcommand(1);

  CommonFlags run_flags, sweep_flags, compare_flags;
  std::string run_config, run_out;
  auto* run = app.add_subcommand("run", "Run one scenario; writes trace.csv and metrics.json");
  run->add_option("--config", run_config, "Scenario config (JSON); defaults when omitted");
  run->add_option("--out", run_out, "Output directory");
  add_common(run, run_flags);

  std::string sweep_config, sweep_out, sweep_param;
  std::vector<double> sweep_values;
  auto* sw = app.add_subcommand("sweep", "Run one scenario per parameter value; writes sweep.csv");
  sw->add_option("--config", sweep_config, "Scenario config (JSON)");
  sw->add_option("--param", sweep_param, "Parameter name (e.g. g, mode.g_o, substeps)")->required();
  sw->add_option("--values", sweep_values, "Comma-separated values")->delimiter(',');
  sw->add_option("--out", sweep_out, "Output directory");
  add_common(sw, sweep_flags);

  std::vector<std::string> compare_configs;
  std::string compare_out;
  auto* cmp = app.add_subcommand("compare", "Run several configs on a shared time grid");
  cmp->add_option("--config,configs", compare_configs, "Scenario configs (two or more)")->required();
  cmp->add_option("--out", compare_out, "Output directory");
  add_common(cmp, compare_flags);

  double perturb_ad = 0.0;
  auto* val = app.add_subcommand("validate", "Run the numerical self-checks");
  val->add_option("--perturb-ad", perturb_ad, "Test hook: offset added to A_d before checking")
      ->group("");

  std::string defaults_config;
  auto* defaults = app.add_subcommand("defaults", "Print the resolved config as JSON");
  defaults->add_option("--config", defaults_config, "Config to resolve; defaults when omitted");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return hpdob::cmd_run(run_config, run_out, run_flags.overrides(), std::cerr);
    if (*sw) {
      return hpdob::cmd_sweep(sweep_config, sweep_param, sweep_values, sweep_out,
                              sweep_flags.overrides(), std::cerr);
    }
    if (*cmp) {
      std::vector<std::filesystem::path> paths(compare_configs.begin(), compare_configs.end());
      return hpdob::cmd_compare(paths, compare_out, compare_flags.overrides(), std::cerr);
    }
    if (*val) {
      hpdob::ValidationOptions opts;
      opts.perturb_ad = perturb_ad;
      return hpdob::cmd_validate(opts, std::cout);
    }
    if (*defaults) {
      const auto cfg = defaults_config.empty()
                           ? hpdob::config_from_json(nlohmann::json::object())
                           : hpdob::load_config(defaults_config);
      std::cout << hpdob::config_to_json(cfg).dump(2) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
