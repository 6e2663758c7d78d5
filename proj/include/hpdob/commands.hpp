#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hpdob/sim.hpp"
#include "hpdob/validate.hpp"

namespace hpdob {

/// Overrides applied on top of a loaded config.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<PlantModel> plant_model;
};

/// Each command returns a process exit status and writes diagnostics to `err`.
/// An empty config path means "all defaults". When `output_dir` is empty the
/// config's output.dir is used, falling back to the current directory.
int cmd_run(const std::filesystem::path& config_path, const std::filesystem::path& output_dir,
            const RunOverrides& overrides, std::ostream& err);

int cmd_sweep(const std::filesystem::path& config_path, const std::string& parameter,
              const std::vector<double>& values, const std::filesystem::path& output_dir,
              const RunOverrides& overrides, std::ostream& err);

int cmd_compare(const std::vector<std::filesystem::path>& config_paths,
                const std::filesystem::path& output_dir, const RunOverrides& overrides,
                std::ostream& err);

int cmd_validate(const ValidationOptions& opts, std::ostream& out);

}  // namespace hpdob
