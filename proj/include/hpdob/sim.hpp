#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hpdob/control.hpp"
#include "hpdob/plant.hpp"
#include "hpdob/signals.hpp"

namespace hpdob {

/// Raised for any invalid scenario definition, before a run starts.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PlantModel {
  /// True plant integrated with RK4 between samples; disturbance varies
  /// continuously inside each period.
  ContinuousTruth,
  /// The nominal ZOH model driven by tau_dn sampled at kTs. Observer error
  /// recursions hold exactly in this mode.
  PureDiscrete,
};

struct NoiseStd {
  double q = 0.0;
  double qdot = 0.0;
};

struct ScenarioConfig {
  PlantPair pair;
  double Ts = 1e-4;
  double duration = 5.0;
  int substeps = 10;
  ControllerMode mode = mode::PdPlusCdob{};
  PdGains pd;
  DisturbanceSpec disturbance = default_disturbance();
  ReferenceSpec reference = tracking_reference();
  State initial_state;
  NoiseStd noise_std;
  std::uint64_t seed = 0;
  PlantModel plant_model = PlantModel::ContinuousTruth;
  /// Symmetric actuator limit; disabled when empty.
  std::optional<double> torque_limit;
  double settle_fraction = 0.2;

  /// Throws ConfigError describing the first invalid field.
  void validate() const;
  /// Number of control steps; the trace holds steps() + 1 samples.
  long steps() const;
};

struct TraceRecord {
  double t = 0.0;
  double q = 0.0;
  double qdot = 0.0;
  double q_ref = 0.0;
  double qdot_ref = 0.0;
  double u = 0.0;
  double tau_d = 0.0;
  double tau_dn = 0.0;
  double tau_hat = 0.0;
  double est_error = 0.0;
};

struct Trace {
  double Ts = 0.0;
  std::vector<TraceRecord> records;
  bool diverged = false;
};

struct Metrics {
  double rms_tracking = 0.0;
  double rms_est_error = 0.0;
  double max_est_error = 0.0;
  bool diverged = false;
  double settle_fraction = 0.2;
};

/// Magnitude of any state or control sample above which a run is declared
/// diverged.
inline constexpr double kDivergenceBound = 1e9;

Trace run_scenario(const ScenarioConfig& cfg);

/// RMS statistics over the samples following the first settle_fraction of the
/// recorded trace. Throws std::invalid_argument on an empty trace or a
/// settle_fraction outside [0, 1).
Metrics compute_metrics(const Trace& trace, double settle_fraction = 0.2);

/// Names accepted by set_parameter / sweep.
const std::vector<std::string>& sweep_parameters();

/// Sets a named scalar parameter on a config. "g" addresses the active
/// observer (both g_p and g_o for the HPDOb). Throws ConfigError on unknown
/// names or names that do not apply to the configured controller mode.
void set_parameter(ScenarioConfig& cfg, const std::string& name, double value);

struct SweepResult {
  double value = 0.0;
  Trace trace;
  Metrics metrics;
};

/// One independent run per value, in input order.
std::vector<SweepResult> sweep(const ScenarioConfig& base, const std::string& parameter,
                               const std::vector<double>& values);

}  // namespace hpdob
