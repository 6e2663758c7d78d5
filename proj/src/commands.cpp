#include "hpdob/commands.hpp"

#include <fstream>
#include <ostream>
#include <set>

#include "hpdob/config.hpp"
#include "hpdob/io.hpp"

namespace hpdob {

namespace fs = std::filesystem;

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ConfigFile resolve(const fs::path& config_path, const RunOverrides& overrides) {
  ConfigFile cfg = config_path.empty() ? config_from_json(nlohmann::json::object())
                                       : load_config(config_path);
  if (overrides.seed) cfg.scenario.seed = *overrides.seed;
  if (overrides.plant_model) cfg.scenario.plant_model = *overrides.plant_model;
  return cfg;
}

fs::path pick_output(const fs::path& flag, const ConfigFile& cfg) {
  if (!flag.empty()) return flag;
  if (cfg.output_dir) return *cfg.output_dir;
  return fs::current_path();
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

void close_checked(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw IoError("failed while writing '" + path.string() + "'");
}

void write_trace_file(const fs::path& path, const Trace& trace) {
  auto out = open_out(path);
  write_trace_csv(out, trace);
  close_checked(out, path);
}

void write_json_file(const fs::path& path, const nlohmann::json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
  close_checked(out, path);
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    body();
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int cmd_run(const fs::path& config_path, const fs::path& output_dir, const RunOverrides& overrides,
            std::ostream& err) {
  return guarded(err, [&] {
    const ConfigFile cfg = resolve(config_path, overrides);
    const fs::path dir = pick_output(output_dir, cfg);
    ensure_dir(dir);
    const Trace trace = run_scenario(cfg.scenario);
    const Metrics metrics = compute_metrics(trace, cfg.scenario.settle_fraction);
    write_trace_file(dir / "trace.csv", trace);
    write_json_file(dir / "metrics.json", metrics_to_json(metrics));
  });
}

int cmd_sweep(const fs::path& config_path, const std::string& parameter,
              const std::vector<double>& values, const fs::path& output_dir,
              const RunOverrides& overrides, std::ostream& err) {
  return guarded(err, [&] {
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    const ConfigFile cfg = resolve(config_path, overrides);
    const fs::path dir = pick_output(output_dir, cfg);
    ensure_dir(dir);
    const auto results = sweep(cfg.scenario, parameter, values);
    for (std::size_t i = 0; i < results.size(); ++i) {
      write_trace_file(dir / ("trace_" + std::to_string(i) + ".csv"), results[i].trace);
    }
    const fs::path sweep_path = dir / "sweep.csv";
    auto out = open_out(sweep_path);
    write_sweep_csv(out, parameter, results);
    close_checked(out, sweep_path);
  });
}

int cmd_compare(const std::vector<fs::path>& config_paths, const fs::path& output_dir,
                const RunOverrides& overrides, std::ostream& err) {
  return guarded(err, [&] {
    if (config_paths.size() < 2) throw ConfigError("compare needs at least two configs");
    std::vector<ConfigFile> configs;
    for (const auto& p : config_paths) configs.push_back(resolve(p, overrides));

    const ScenarioConfig& first = configs.front().scenario;
    for (std::size_t i = 1; i < configs.size(); ++i) {
      const ScenarioConfig& s = configs[i].scenario;
      if (s.Ts != first.Ts || s.steps() != first.steps()) {
        throw ConfigError("time grids differ: '" + config_paths.front().string() + "' and '" +
                          config_paths[i].string() + "' must share Ts and duration");
      }
    }

    std::vector<NamedRun> runs;
    std::set<std::string> used;
    for (std::size_t i = 0; i < configs.size(); ++i) {
      std::string name = config_paths[i].stem().string();
      if (name.empty() || used.count(name)) name += "_" + std::to_string(i);
      used.insert(name);
      Trace trace = run_scenario(configs[i].scenario);
      const Metrics metrics = compute_metrics(trace, configs[i].scenario.settle_fraction);
      runs.push_back({name, std::move(trace), metrics});
    }

    const fs::path dir = pick_output(output_dir, configs.front());
    ensure_dir(dir);
    const fs::path cmp_path = dir / "comparison.csv";
    auto out = open_out(cmp_path);
    write_comparison_csv(out, runs);
    close_checked(out, cmp_path);
    write_json_file(dir / "ranking.json", ranking_json(runs));
  });
}

int cmd_validate(const ValidationOptions& opts, std::ostream& out) {
  return report_validation(out, run_validation(opts)) ? 0 : 1;
}

}  // namespace hpdob
