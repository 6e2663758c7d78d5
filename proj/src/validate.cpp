#include "hpdob/validate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "hpdob/control.hpp"
#include "hpdob/observers.hpp"
#include "hpdob/plant.hpp"

namespace hpdob {

namespace {

double rel_err(double value, double ref) {
  const double diff = std::abs(value - ref);
  return ref == 0.0 ? diff : diff / std::abs(ref);
}

CheckResult make(std::string name, double residual, double tol, std::string detail = {}) {
  return {std::move(name), residual <= tol, false, residual, tol, std::move(detail)};
}

CheckResult discretization_check(const ValidationOptions& opts) {
  std::mt19937 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    ServoParams p;
    p.inertia = 0.01 * std::pow(1000.0, unit(rng));
    p.viscous = unit(rng);
    const double Ts = 1e-5 * std::pow(1000.0, unit(rng));
    const ContinuousModel cm = build_continuous(p);
    DiscreteModel dm = discretize(cm, Ts);
    dm.A(0, 1) += opts.perturb_ad;

    const Mat2 A_ref = matrix_exp_oracle(cm.A, Ts);
    const Vec2 D_ref = exact_disturbance_input([](double) { return 1.0; }, cm, 0, Ts, 256);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) worst = std::max(worst, rel_err(dm.A(r, c), A_ref(r, c)));
      worst = std::max(worst, rel_err(dm.B[r], D_ref[r]));
      worst = std::max(worst, rel_err(dm.D[r], D_ref[r]));
    }
  }
  return make("discretization vs series/quadrature oracle (100 draws)", worst, 1e-10,
              "max relative error over A_d, B_d, D_d entries");
}

CheckResult determinant_check(const ValidationOptions& opts) {
  std::mt19937 rng(opts.seed + 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    ServoParams p{0.01 * std::pow(1000.0, unit(rng)), unit(rng), i % 2 == 0 ? -1 : 1};
    const double Ts = 1e-5 * std::pow(1000.0, unit(rng));
    const ContinuousModel cm = build_continuous(p);
    const DiscreteModel dm = discretize(cm, Ts);
    worst = std::max(worst, rel_err(dm.A.determinant(), std::exp(cm.A.trace() * Ts)));
  }
  return make("det(A_d) = exp(trace(A_c) Ts)", worst, 1e-12);
}

CheckResult derivative_matching_check(const ValidationOptions& opts) {
  std::mt19937 rng(opts.seed + 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const ServoParams pt{0.05 + unit(rng), unit(rng) * 0.2, -1};
    const ServoParams pn{0.05 + unit(rng), unit(rng) * 0.2, -1};
    const ContinuousModel ct = build_continuous(pt);
    const ContinuousModel cn = build_continuous(pn);
    const State x{sym(rng), sym(rng) * 5.0};
    const double u = sym(rng) * 10.0;
    const double tau_d = sym(rng) * 10.0;
    const double tau_dn = nominal_disturbance(x, u, tau_d, ct, cn);
    const Vec2 f_true = ct.A * x.vec() + ct.B * u - ct.D * tau_d;
    const Vec2 f_nom = cn.A * x.vec() + cn.B * u - cn.D * tau_dn;
    worst = std::max(worst, (f_true - f_nom).cwiseAbs().maxCoeff());
  }
  return make("nominal disturbance reproduces the true state derivative", worst, 1e-12);
}

// Drives a matched discrete plant with PD + disturbance cancellation and
// measures how far the auxiliary error departs from its one-step recursion.
// `use_hpdob` selects the HPDOb (order 1, predictor gain equal) instead of the
// conventional observer.
double recursion_residual(double g, const std::function<double(long)>& tau, bool use_hpdob,
                          int order, long steps) {
  const ServoParams p;
  const DiscreteModel dm = discretize(build_continuous(p), 1e-4);
  const ObserverGain gain = tune_gain(g, dm.D);
  const double rho = 1.0 - gain.L.dot(dm.D);
  const PdGains pd;

  CdobState cdob;
  PredictorState pred;
  HpdobState hp{0.0, order, CoeffMode::Derived};
  State x;
  double prev_err = 0.0;
  double prev_delta_gap = 0.0;
  double worst = 0.0;
  for (long k = 0; k <= steps; ++k) {
    const double z_hat = use_hpdob ? hp.z_hat_o : cdob.z_hat;
    const double tau_hat = auxiliary_estimate(z_hat, x, gain);
    const double err = tau(k) - tau_hat;
    if (k > 0) worst = std::max(worst, std::abs(err - (rho * prev_err + prev_delta_gap)));
    const double u = compose_control(pd_control({}, x, pd), tau_hat);

    double delta_hat = 0.0;
    if (use_hpdob) {
      pred = predictor_update(pred, x, u, dm, gain).state;
      delta_hat = delta_estimate(pred.history, order, CoeffMode::Derived);
      hp = hpdob_update(hp, x, u, delta_hat, dm, gain).state;
    } else {
      cdob = cdob_update(cdob, x, u, dm, gain).state;
    }
    prev_err = err;
    prev_delta_gap = (tau(k + 1) - tau(k)) - delta_hat;
    x = step_discrete(dm, x, u, tau(k));
  }
  return worst;
}

CheckResult cdob_recursion_check() {
  const std::vector<std::function<double(long)>> shapes = {
      [](long) { return 1.0; },
      [](long k) { return 0.5 + 1e-3 * static_cast<double>(k); },
      [](long k) { return 2.0 * std::sin(2.0 * 3.141592653589793 * 1e-4 * static_cast<double>(k)); },
  };
  double worst = 0.0;
  for (double g : {0.15, 0.35, 1.0, 1.9}) {
    for (const auto& s : shapes) worst = std::max(worst, recursion_residual(g, s, false, 1, 2000));
  }
  return make("conventional DOB error recursion e(k+1) = (1-g) e(k) + delta", worst, 1e-12);
}

CheckResult hpdob_recursion_check() {
  const auto tau = [](long k) {
    const double t = 1e-4 * static_cast<double>(k);
    return std::sin(2.0 * 3.141592653589793 * t) + 0.3 * t * t;
  };
  double worst = 0.0;
  for (int order : {1, 2}) worst = std::max(worst, recursion_residual(0.15, tau, true, order, 2000));
  return make("HPDOb error recursion with the supplied variation estimate", worst, 1e-12);
}

CheckResult quadrature_constant_check() {
  const ContinuousModel cm = build_continuous(ServoParams{});
  const double Ts = 1e-3;
  const DiscreteModel dm = discretize(cm, Ts);
  const double c = 2.5;
  const Vec2 pi = exact_disturbance_input([c](double) { return c; }, cm, 7, Ts, 64);
  const double err = std::max(rel_err(pi[0], dm.D[0] * c), rel_err(pi[1], dm.D[1] * c));
  return make("exact disturbance input equals D_d c for constant disturbance", err, 1e-12);
}

CheckResult quadrature_refinement_check() {
  const ServoParams p{0.01, 1.0, -1};
  const ContinuousModel cm = build_continuous(p);
  const double Ts = 1e-2;
  const auto tau = [](double t) { return std::sin(2.0 * 3.141592653589793 * 40.0 * t); };
  const Vec2 fine = exact_disturbance_input(tau, cm, 3, Ts, 4096);
  const double e_coarse = (exact_disturbance_input(tau, cm, 3, Ts, 8) - fine).norm();
  const double e_half = (exact_disturbance_input(tau, cm, 3, Ts, 16) - fine).norm();
  const double ratio = e_coarse / e_half;
  std::ostringstream detail;
  detail << "error ratio when doubling panels = " << ratio << " (Simpson: ~16)";
  // residual reported as the shortfall from the expected >= 8 reduction
  return make("quadrature refinement of the exact disturbance input", std::max(0.0, 8.0 - ratio), 0.0,
              detail.str());
}

CheckResult paper_literal_coefficients_check() {
  PredictorHistory h;
  for (int i = 0; i < 3; ++i) h.push(1.0);
  const double derived = delta_estimate(h, 2, CoeffMode::Derived);
  const double literal = delta_estimate(h, 2, CoeffMode::PaperLiteral);
  CheckResult r;
  r.name = "second-order variation estimate on a constant sequence";
  r.informational = true;
  r.passed = derived == 0.0 && literal != 0.0;
  r.residual = literal;
  std::ostringstream detail;
  detail << "derived coefficients give " << derived << ", literal coefficients give " << literal
         << " (expected nonzero)";
  r.detail = detail.str();
  return r;
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& opts) {
  return {
      discretization_check(opts),     determinant_check(opts),
      derivative_matching_check(opts), cdob_recursion_check(),
      hpdob_recursion_check(),        quadrature_constant_check(),
      quadrature_refinement_check(),  paper_literal_coefficients_check(),
  };
}

bool report_validation(std::ostream& out, const std::vector<CheckResult>& results) {
  bool ok = true;
  for (const auto& r : results) {
    const char* tag = r.informational ? "INFO" : (r.passed ? "PASS" : "FAIL");
    out << '[' << tag << "] " << r.name << ": residual " << std::setprecision(3) << std::scientific
        << r.residual;
    if (!r.informational) out << " (tol " << r.tolerance << ")";
    out << std::defaultfloat;
    if (!r.detail.empty()) out << " -- " << r.detail;
    out << '\n';
    if (!r.informational && !r.passed) ok = false;
  }
  return ok;
}

}  // namespace hpdob
