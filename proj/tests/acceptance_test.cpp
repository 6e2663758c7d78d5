// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hpdob/commands.hpp"
#include "hpdob/control.hpp"
#include "hpdob/observers.hpp"
#include "hpdob/plant.hpp"
#include "hpdob/sim.hpp"

using namespace hpdob;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] %2d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double rel_err(double value, double ref) {
  const double diff = std::abs(value - ref);
  return ref == 0.0 ? diff : diff / std::abs(ref);
}

ScenarioConfig pure_discrete(double g, DisturbanceSpec d, double duration) {
  ScenarioConfig cfg;
  cfg.plant_model = PlantModel::PureDiscrete;
  cfg.mode = mode::PdPlusCdob{g};
  cfg.disturbance = std::move(d);
  cfg.reference = reference::Hold{0.0};
  cfg.duration = duration;
  return cfg;
}

Metrics benchmark(ControllerMode m) {
  ScenarioConfig cfg;
  cfg.mode = std::move(m);
  const Trace tr = run_scenario(cfg);
  return compute_metrics(tr, cfg.settle_fraction);
}

void discretization() {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    ServoParams p;
    p.inertia = 0.01 * std::pow(1000.0, unit(rng));
    p.viscous = unit(rng);
    const double Ts = 1e-5 * std::pow(1000.0, unit(rng));
    const ContinuousModel cm = build_continuous(p);
    const DiscreteModel dm = discretize(cm, Ts);
    const Mat2 A_ref = matrix_exp_oracle(cm.A, Ts);
    const Vec2 D_ref = exact_disturbance_input([](double) { return 1.0; }, cm, 0, Ts, 256);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) worst = std::max(worst, rel_err(dm.A(r, c), A_ref(r, c)));
      worst = std::max(worst, rel_err(dm.B[r], D_ref[r]));
      worst = std::max(worst, rel_err(dm.D[r], D_ref[r]));
    }
  }
  report(1, "discretization exactness", worst <= 1e-10,
         fmt("max rel err %.3e over 100 draws (tol 1e-10)", worst));
}

void recursion_exactness() {
  const std::vector<std::pair<std::string, DisturbanceSpec>> shapes = {
      {"constant", disturbance::Constant{1.5}},
      {"ramp", disturbance::Ramp{0.2, 3.0}},
      {"sine", disturbance::SineSum{{{2.0, 5.0, 0.3}}}},
  };
  double worst = 0.0;
  for (double g : {0.15, 0.35, 1.0, 1.9}) {
    for (const auto& [name, d] : shapes) {
      const Trace tr = run_scenario(pure_discrete(g, d, 0.2));
      const auto& r = tr.records;
      for (std::size_t k = 0; k + 1 < r.size(); ++k) {
        const double predicted = (1.0 - g) * r[k].est_error + (r[k + 1].tau_dn - r[k].tau_dn);
        worst = std::max(worst, std::abs(r[k + 1].est_error - predicted));
      }
    }
  }
  report(2, "error recursion exactness", worst <= 1e-12,
         fmt("max residual %.3e over 4 gains x 3 shapes (tol 1e-12)", worst));
}

void geometric_decay() {
  const double g = 0.5;
  const Trace tr = run_scenario(pure_discrete(g, disturbance::Constant{1.0}, 0.05));
  const auto& r = tr.records;
  const double e0 = r[0].est_error;
  double worst = 0.0;
  for (std::size_t k = 0; k < 500; ++k) {
    worst = std::max(worst, std::abs(r[k].est_error - std::pow(1.0 - g, k) * e0) / std::abs(e0));
  }
  report(3, "geometric decay", e0 != 0.0 && r.size() > 500 && worst <= 1e-9,
         fmt("max |e(k) - (1-g)^k e(0)| / |e(0)| = %.3e over 500 steps, e(0) = %g (tol 1e-9)", worst, e0));
}

void stability_boundary() {
  const Trace stable = run_scenario(pure_discrete(1.9, disturbance::Constant{1.0}, 0.2));
  const double e0 = std::abs(stable.records.front().est_error);
  const double e_end = std::abs(stable.records.back().est_error);
  const Trace unstable = run_scenario(pure_discrete(2.1, disturbance::Constant{1.0}, 0.2));
  double peak = 0.0;
  for (std::size_t k = 0; k < std::min<std::size_t>(200, unstable.records.size()); ++k) {
    peak = std::max(peak, std::abs(unstable.records[k].est_error));
  }
  const bool ok = !stable.diverged && e_end <= 1e-9 * e0 && peak > 1e6;
  report(4, "stability boundary", ok,
         fmt("g=1.9 |e| %.3e -> %.3e; g=2.1 peak |e| in 200 steps %.3e (> 1e6)", e0, e_end, peak));
}

void ramp_annihilation() {
  const double g = 0.25;
  const double slope = 10.0;
  const DisturbanceSpec ramp = disturbance::Ramp{0.2, slope};
  ScenarioConfig cfg = pure_discrete(g, ramp, 0.4);
  const double delta = slope * cfg.Ts;
  const Trace cdob = run_scenario(cfg);
  const double e_c = std::abs(cdob.records.back().est_error);
  const double rel = rel_err(e_c, delta / g);

  cfg.mode = mode::PdPlusHpdob{1, g, g, CoeffMode::Derived};
  const Trace hp = run_scenario(cfg);
  double e_o = 0.0;
  for (std::size_t k = hp.records.size() / 2; k < hp.records.size(); ++k) {
    e_o = std::max(e_o, std::abs(hp.records[k].est_error));
  }
  report(5, "ramp annihilation", rel <= 1e-6 && e_o < 1e-9,
         fmt("CDOB |e| = %.6e vs delta/g = %.6e (rel %.2e)", e_c, delta / g, rel) +
             fmt("; HPDOb-1 max |e| over second half %.3e (tol 1e-9)", e_o));
}

void oracle_delta() {
  const DiscreteModel dm = discretize(build_continuous({}), 1e-4);
  const auto tau = [&](long k) {
    const double t = k * dm.Ts;
    return 3.0 * std::sin(2 * M_PI * 1.3 * t) + 0.5 * t * t + 0.8 * std::cos(2 * M_PI * 7.0 * t + 0.2);
  };
  double worst = 0.0;
  for (double g : {0.15, 0.5}) {
    const ObserverGain gain = tune_gain(g, dm.D);
    HpdobState hp;
    State x;
    double e0 = 0.0;
    for (long k = 0; k < 500; ++k) {
      const double tau_hat = auxiliary_estimate(hp.z_hat_o, x, gain);
      const double e = tau(k) - tau_hat;
      if (k == 0) e0 = e;
      worst = std::max(worst, std::abs(e - std::pow(1.0 - g, k) * e0) / std::abs(e0));
      const double u = compose_control(pd_control({}, x, PdGains{}), tau_hat);
      hp = hpdob_update(hp, x, u, tau(k + 1) - tau(k), dm, gain).state;
      x = step_discrete(dm, x, u, tau(k));
    }
  }
  report(6, "oracle variation exactness", worst <= 1e-9,
         fmt("max |e(k) - (1-g)^k e(0)| / |e(0)| = %.3e, g in {0.15, 0.5}, 500 steps (tol 1e-9)", worst));
}

void gain_ordering(const Metrics& c15) {
  const Metrics c25 = benchmark(mode::PdPlusCdob{0.25});
  const Metrics c35 = benchmark(mode::PdPlusCdob{0.35});
  const bool ok = c15.rms_est_error > c25.rms_est_error && c25.rms_est_error > c35.rms_est_error;
  report(7, "CDOB gain ordering", ok,
         fmt("rms_est_error g=0.15 %.6f > g=0.25 %.6f > g=0.35 %.6f", c15.rms_est_error, c25.rms_est_error,
             c35.rms_est_error));
}

void first_order_vs_cdob(const Metrics& c15, const Metrics& hp1) {
  const double ratio = hp1.rms_est_error / c15.rms_est_error;
  report(8, "HPDOb-1 below CDOB", hp1.rms_est_error < c15.rms_est_error && ratio < 0.60,
         fmt("rms_est_error hp1 %.6f, cdob %.6f, ratio %.4f (bound 0.60)", hp1.rms_est_error, c15.rms_est_error,
             ratio));
}

void second_order_vs_first(const Metrics& hp1) {
  const Metrics hp2 = benchmark(mode::PdPlusHpdob{2, 0.15, 0.15, CoeffMode::Derived});
  const double gap = std::abs(hp2.rms_est_error - hp1.rms_est_error) / hp1.rms_est_error;
  report(9, "HPDOb-2 vs HPDOb-1", hp2.rms_est_error <= hp1.rms_est_error && gap <= 0.10,
         fmt("rms_est_error hp2 %.6f, hp1 %.6f, relative gap %.4f (band 0.10)", hp2.rms_est_error,
             hp1.rms_est_error, gap));
}

void pd_vs_cdob(const Metrics& c15) {
  const Metrics pd = benchmark(mode::PdOnly{});
  report(10, "PD-only vs PD+CDOB tracking", pd.rms_tracking > c15.rms_tracking,
         fmt("rms_tracking pd %.6f, pd+cdob %.6f, margin x%.2f", pd.rms_tracking, c15.rms_tracking,
             pd.rms_tracking / c15.rms_tracking));
}

void coefficient_audit() {
  PredictorHistory h;
  for (int i = 0; i < 3; ++i) h.push(2.5);
  const double derived = delta_estimate(h, 2, CoeffMode::Derived);
  const double literal = delta_estimate(h, 2, CoeffMode::PaperLiteral);
  report(11, "second-order coefficient audit", derived == 0.0 && literal != 0.0,
         fmt("constant history 2.5: derived %g, literal %g", derived, literal));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void determinism() {
  const fs::path root = fs::temp_directory_path() / "hpdob_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path plain = root / "plain.json";
  const fs::path noisy = root / "noisy.json";
  std::ofstream(plain) << "{}";
  std::ofstream(noisy) << R"({"controller": {"mode": "hpdob", "order": 2, "g_p": 0.2, "g_o": 0.15},
                              "noise": {"q_std": 1e-5, "qdot_std": 1e-3, "seed": 42}})";
  bool ok = true;
  std::size_t bytes = 0;
  std::ostringstream err;
  for (const auto& cfg : {plain, noisy}) {
    const fs::path a = root / (cfg.stem().string() + "_a");
    const fs::path b = root / (cfg.stem().string() + "_b");
    ok = ok && cmd_run(cfg, a, {}, err) == 0 && cmd_run(cfg, b, {}, err) == 0;
    const std::string ta = slurp(a / "trace.csv");
    ok = ok && !ta.empty() && ta == slurp(b / "trace.csv");
    bytes += ta.size();
  }
  fs::remove_all(root);
  report(12, "bitwise determinism", ok,
         fmt("2 scenarios run twice, %.0f bytes of trace.csv compared", static_cast<double>(bytes)) +
             (err.str().empty() ? "" : " (" + err.str() + ")"));
}

}  // namespace

int main() {
  discretization();
  recursion_exactness();
  geometric_decay();
  stability_boundary();
  ramp_annihilation();
  oracle_delta();
  const Metrics c15 = benchmark(mode::PdPlusCdob{0.15});
  const Metrics hp1 = benchmark(mode::PdPlusHpdob{1, 0.15, 0.15, CoeffMode::Derived});
  gain_ordering(c15);
  first_order_vs_cdob(c15, hp1);
  second_order_vs_first(hp1);
  pd_vs_cdob(c15);
  coefficient_audit();
  determinism();
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
