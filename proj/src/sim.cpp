#include "hpdob/sim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>

#include "hpdob/observers.hpp"

namespace hpdob {

namespace {

bool out_of_bounds(double v) { return !std::isfinite(v) || std::abs(v) > kDivergenceBound; }

// Running observer bank for one scenario. Estimation (before u is known) and
// advancing (after u is applied) are separate so the same-step x(k), u(k)
// feed the recursion.
class ObserverBank {
 public:
  ObserverBank(const ControllerMode& m, const DiscreteModel& dm) : mode_(m), dm_(dm) {
    if (const auto* c = std::get_if<mode::PdPlusCdob>(&mode_)) {
      gain_ = tune_gain(c->g, dm_.D);
    } else if (const auto* h = std::get_if<mode::PdPlusHpdob>(&mode_)) {
      gain_p_ = tune_gain(h->g_p, dm_.D);
      gain_ = tune_gain(h->g_o, dm_.D);
      hpdob_.order = h->order;
      hpdob_.coeff_mode = h->coeff_mode;
    }
  }

  double estimate(const State& measured) const {
    if (std::holds_alternative<mode::PdPlusCdob>(mode_)) {
      return auxiliary_estimate(cdob_.z_hat, measured, gain_);
    }
    if (std::holds_alternative<mode::PdPlusHpdob>(mode_)) {
      return auxiliary_estimate(hpdob_.z_hat_o, measured, gain_);
    }
    return 0.0;
  }

  void advance(const State& measured, double u) {
    if (std::holds_alternative<mode::PdPlusCdob>(mode_)) {
      cdob_ = cdob_update(cdob_, measured, u, dm_, gain_).state;
    } else if (std::holds_alternative<mode::PdPlusHpdob>(mode_)) {
      // The predictor runs first so that the variation estimate uses its
      // output at the current sample.
      predictor_ = predictor_update(predictor_, measured, u, dm_, gain_p_).state;
      const double delta = delta_estimate(predictor_.history, hpdob_.order, hpdob_.coeff_mode);
      hpdob_ = hpdob_update(hpdob_, measured, u, delta, dm_, gain_).state;
    }
  }

 private:
  ControllerMode mode_;
  DiscreteModel dm_;
  ObserverGain gain_;
  ObserverGain gain_p_;
  CdobState cdob_;
  PredictorState predictor_;
  HpdobState hpdob_;
};

}  // namespace

void ScenarioConfig::validate() const {
  try {
    pair.true_params.validate();
    pair.nominal_params.validate();
    pd.validate();
    validate_mode(mode);
    disturbance.validate();
    reference.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(Ts > 0.0) || !std::isfinite(Ts)) throw ConfigError("Ts must be positive");
  if (!(duration > Ts) || !std::isfinite(duration)) throw ConfigError("duration must exceed Ts");
  if (substeps < 1) throw ConfigError("substeps must be >= 1");
  if (!initial_state.finite()) throw ConfigError("initial state must be finite");
  if (!(noise_std.q >= 0.0) || !(noise_std.qdot >= 0.0) || !std::isfinite(noise_std.q) ||
      !std::isfinite(noise_std.qdot)) {
    throw ConfigError("noise standard deviations must be finite and non-negative");
  }
  if (torque_limit && !(*torque_limit > 0.0)) throw ConfigError("torque_limit must be positive");
  if (!(settle_fraction >= 0.0 && settle_fraction < 1.0)) {
    throw ConfigError("settle_fraction must lie in [0, 1)");
  }
}

long ScenarioConfig::steps() const { return std::lround(duration / Ts); }

Trace run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();

  const ContinuousModel cm_true = build_continuous(cfg.pair.true_params);
  const ContinuousModel cm_nom = build_continuous(cfg.pair.nominal_params);
  const DiscreteModel dm_nom = discretize(cm_nom, cfg.Ts);

  ObserverBank observers(cfg.mode, dm_nom);
  const bool noisy = cfg.noise_std.q > 0.0 || cfg.noise_std.qdot > 0.0;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  const auto tau_d_of = [&cfg](double t, const State& s) {
    return eval_disturbance(cfg.disturbance, t, s);
  };

  const long n = cfg.steps();
  Trace trace;
  trace.Ts = cfg.Ts;
  trace.records.reserve(static_cast<std::size_t>(n) + 1);

  State x = cfg.initial_state;
  for (long k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * cfg.Ts;
    if (out_of_bounds(x.q) || out_of_bounds(x.qdot)) {
      trace.diverged = true;
      break;
    }

    State measured = x;
    if (noisy) {
      measured.q += cfg.noise_std.q * normal(rng);
      measured.qdot += cfg.noise_std.qdot * normal(rng);
    }

    const ReferenceSample ref = eval_reference(cfg.reference, t);
    const double tau_d = tau_d_of(t, x);
    const double tau_hat = observers.estimate(measured);
    double u = compose_control(pd_control(ref, measured, cfg.pd), tau_hat);
    if (cfg.torque_limit) u = std::clamp(u, -*cfg.torque_limit, *cfg.torque_limit);
    if (out_of_bounds(u) || out_of_bounds(tau_hat)) {
      trace.diverged = true;
      break;
    }
    const double tau_dn = nominal_disturbance(x, u, tau_d, cm_true, cm_nom);

    trace.records.push_back(
        {t, x.q, x.qdot, ref.q, ref.qdot, u, tau_d, tau_dn, tau_hat, tau_dn - tau_hat});

    if (k == n) break;
    observers.advance(measured, u);
    if (cfg.plant_model == PlantModel::ContinuousTruth) {
      x = step_truth(cfg.pair.true_params, x, u, tau_d_of, t, cfg.Ts, cfg.substeps);
    } else {
      x = step_discrete(dm_nom, x, u, tau_dn);
    }
  }
  return trace;
}

Metrics compute_metrics(const Trace& trace, double settle_fraction) {
  if (trace.records.empty()) throw std::invalid_argument("cannot compute metrics of an empty trace");
  if (!(settle_fraction >= 0.0 && settle_fraction < 1.0)) {
    throw std::invalid_argument("settle_fraction must lie in [0, 1)");
  }
  const std::size_t total = trace.records.size();
  const auto skip = std::min(total - 1, static_cast<std::size_t>(
                                            std::floor(settle_fraction * static_cast<double>(total))));

  double sum_track = 0.0;
  double sum_est = 0.0;
  double max_est = 0.0;
  for (std::size_t i = skip; i < total; ++i) {
    const auto& r = trace.records[i];
    const double e_track = r.q_ref - r.q;
    sum_track += e_track * e_track;
    sum_est += r.est_error * r.est_error;
    max_est = std::max(max_est, std::abs(r.est_error));
  }
  const auto count = static_cast<double>(total - skip);
  return {std::sqrt(sum_track / count), std::sqrt(sum_est / count), max_est, trace.diverged,
          settle_fraction};
}

const std::vector<std::string>& sweep_parameters() {
  static const std::vector<std::string> names = {
      "g",          "mode.g",          "mode.g_p",            "mode.g_o",
      "mode.order", "pd.Kp",           "pd.Kd",               "Ts",
      "duration",   "substeps",        "seed",                "noise_std.q",
      "noise_std.qdot", "plant.true.inertia", "plant.true.viscous", "plant.nominal.inertia",
      "plant.nominal.viscous", "torque_limit", "settle_fraction"};
  return names;
}

void set_parameter(ScenarioConfig& cfg, const std::string& name, double value) {
  auto* cdob = std::get_if<mode::PdPlusCdob>(&cfg.mode);
  auto* hp = std::get_if<mode::PdPlusHpdob>(&cfg.mode);
  const auto require = [&name](bool ok) {
    if (!ok) throw ConfigError("parameter '" + name + "' does not apply to the configured controller mode");
  };
  const auto as_count = [&name](double v) {
    if (v != std::floor(v)) throw ConfigError("parameter '" + name + "' expects an integer value");
    return static_cast<long long>(v);
  };

  if (name == "g") {
    require(cdob || hp);
    if (cdob) cdob->g = value;
    else hp->g_p = hp->g_o = value;
  } else if (name == "mode.g") {
    require(cdob);
    cdob->g = value;
  } else if (name == "mode.g_p") {
    require(hp);
    hp->g_p = value;
  } else if (name == "mode.g_o") {
    require(hp);
    hp->g_o = value;
  } else if (name == "mode.order") {
    require(hp);
    hp->order = static_cast<int>(as_count(value));
  } else if (name == "pd.Kp") {
    cfg.pd.Kp = value;
  } else if (name == "pd.Kd") {
    cfg.pd.Kd = value;
  } else if (name == "Ts") {
    cfg.Ts = value;
  } else if (name == "duration") {
    cfg.duration = value;
  } else if (name == "substeps") {
    cfg.substeps = static_cast<int>(as_count(value));
  } else if (name == "seed") {
    if (value < 0) throw ConfigError("seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(as_count(value));
  } else if (name == "noise_std.q") {
    cfg.noise_std.q = value;
  } else if (name == "noise_std.qdot") {
    cfg.noise_std.qdot = value;
  } else if (name == "plant.true.inertia") {
    cfg.pair.true_params.inertia = value;
  } else if (name == "plant.true.viscous") {
    cfg.pair.true_params.viscous = value;
  } else if (name == "plant.nominal.inertia") {
    cfg.pair.nominal_params.inertia = value;
  } else if (name == "plant.nominal.viscous") {
    cfg.pair.nominal_params.viscous = value;
  } else if (name == "torque_limit") {
    cfg.torque_limit = value;
  } else if (name == "settle_fraction") {
    cfg.settle_fraction = value;
  } else {
    throw ConfigError("unknown sweep parameter '" + name + "'");
  }
}

std::vector<SweepResult> sweep(const ScenarioConfig& base, const std::string& parameter,
                               const std::vector<double>& values) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");

  std::vector<ScenarioConfig> configs;
  configs.reserve(values.size());
  for (double v : values) {
    ScenarioConfig cfg = base;
    set_parameter(cfg, parameter, v);
    cfg.validate();
    configs.push_back(std::move(cfg));
  }

  std::vector<std::future<SweepResult>> pending;
  pending.reserve(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    pending.push_back(std::async(std::launch::async, [&configs, &values, i] {
      Trace trace = run_scenario(configs[i]);
      Metrics metrics = compute_metrics(trace, configs[i].settle_fraction);
      return SweepResult{values[i], std::move(trace), metrics};
    }));
  }
  std::vector<SweepResult> out;
  out.reserve(pending.size());
  for (auto& f : pending) out.push_back(f.get());
  return out;
}

}  // namespace hpdob
