#include "hpdob/plant.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hpdob {

void ServoParams::validate() const {
  if (!(inertia > 0.0) || !std::isfinite(inertia)) {
    throw std::invalid_argument("servo inertia must be positive and finite, got " +
                                std::to_string(inertia));
  }
  if (!(viscous >= 0.0) || !std::isfinite(viscous)) {
    throw std::invalid_argument("viscous friction must be non-negative and finite, got " +
                                std::to_string(viscous));
  }
  if (damping_sign != 1 && damping_sign != -1) {
    throw std::invalid_argument("damping_sign must be +1 or -1, got " +
                                std::to_string(damping_sign));
  }
}

bool State::finite() const { return std::isfinite(q) && std::isfinite(qdot); }

ContinuousModel build_continuous(const ServoParams& params) {
  params.validate();
  ContinuousModel cm;
  cm.A << 0.0, 1.0,
          0.0, params.damping_sign * params.viscous / params.inertia;
  cm.B << 0.0, 1.0 / params.inertia;
  cm.D = cm.B;
  return cm;
}

double phi1(double x) {
  if (std::abs(x) < 1e-6) {
    return 1.0 - x / 2.0 + x * x / 6.0;
  }
  return -std::expm1(-x) / x;
}

double phi2(double x) {
  // The closed form cancels badly for small |x|; below 0.1 the alternating
  // series sum (-x)^n / (n+2)! converges to full precision within 16 terms.
  if (std::abs(x) < 0.1) {
    double term = 0.5;
    double sum = term;
    for (int n = 1; n < 16; ++n) {
      term *= -x / (n + 2);
      sum += term;
    }
    return sum;
  }
  return (x + std::expm1(-x)) / (x * x);
}

DiscreteModel discretize(const ContinuousModel& cm, double Ts) {
  if (!(Ts > 0.0) || !std::isfinite(Ts)) {
    throw std::invalid_argument("sampling period must be positive, got " + std::to_string(Ts));
  }
  const double a = -cm.A(1, 1);
  const double x = a * Ts;
  const double inv_j = cm.B[1];
  const double inv_j_d = cm.D[1];

  DiscreteModel dm;
  dm.Ts = Ts;
  dm.A << 1.0, Ts * phi1(x),
          0.0, std::exp(-x);
  dm.B << Ts * Ts * phi2(x) * inv_j, Ts * phi1(x) * inv_j;
  dm.D << Ts * Ts * phi2(x) * inv_j_d, Ts * phi1(x) * inv_j_d;
  return dm;
}

Mat2 matrix_exp_oracle(const Mat2& A, double t, double tol) {
  Mat2 M = A * t;
  const double norm = M.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    M /= std::ldexp(1.0, squarings);
  }

  Mat2 sum = Mat2::Identity();
  Mat2 term = Mat2::Identity();
  for (int n = 1; n < 64; ++n) {
    term = term * M / static_cast<double>(n);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < tol) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

double nominal_disturbance(const State& x, double u, double tau_d,
                           const ContinuousModel& cm_true,
                           const ContinuousModel& cm_nom) {
  // Only the second row of D_cn is nonzero, so the rank-1 projection reduces
  // to dividing the second-row residual by D_cn[1].
  const Vec2 xv = x.vec();
  const Vec2 residual = (cm_nom.A - cm_true.A) * xv + (cm_nom.B - cm_true.B) * u +
                        cm_true.D * tau_d;
  return residual[1] / cm_nom.D[1];
}

Vec2 exact_disturbance_input(const TimeSignal& tau_dn,
                             const ContinuousModel& cm_nom, long k, double Ts,
                             int quad_points) {
  if (quad_points < 2) {
    throw std::invalid_argument("quad_points must be >= 2");
  }
  if (!(Ts > 0.0)) {
    throw std::invalid_argument("sampling period must be positive");
  }
  const int panels = quad_points + (quad_points % 2);
  const double h = Ts / panels;
  const double t_end = static_cast<double>(k + 1) * Ts;

  Vec2 acc = Vec2::Zero();
  for (int i = 0; i <= panels; ++i) {
    const double tau = i * h;
    const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * (matrix_exp_oracle(cm_nom.A, tau) * cm_nom.D) * tau_dn(t_end - tau);
  }
  return acc * (h / 3.0);
}

State step_discrete(const DiscreteModel& dm, const State& x, double u,
                    double tau_dn) {
  return State::from(dm.A * x.vec() + dm.B * u - dm.D * tau_dn);
}

State step_truth(const ServoParams& params, const State& x, double u_zoh,
                 const StateSignal& tau_d, double t0, double Ts, int substeps) {
  if (substeps < 1) {
    throw std::invalid_argument("substeps must be >= 1");
  }
  const ContinuousModel cm = build_continuous(params);
  const auto f = [&](double t, const Vec2& s) -> Vec2 {
    return cm.A * s + cm.B * u_zoh - cm.D * tau_d(t, State::from(s));
  };

  const double dt = Ts / substeps;
  Vec2 s = x.vec();
  for (int i = 0; i < substeps; ++i) {
    const double t = t0 + i * dt;
    const Vec2 k1 = f(t, s);
    const Vec2 k2 = f(t + 0.5 * dt, s + 0.5 * dt * k1);
    const Vec2 k3 = f(t + 0.5 * dt, s + 0.5 * dt * k2);
    const Vec2 k4 = f(t + dt, s + dt * k3);
    s += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return State::from(s);
}

}  // namespace hpdob
