#pragma once

#include <functional>

#include <Eigen/Dense>

namespace hpdob {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Physical parameters of a single-axis servo: J qddot = u - b qdot - tau_d.
///
/// `damping_sign` multiplies b/J in the state matrix. The default (-1) gives a
/// dissipative plant; +1 reproduces the literal textbook form where the entry
/// is printed as +b/J.
struct ServoParams {
  double inertia = 0.125;  // kg m^2
  double viscous = 0.045;  // N m s / rad
  int damping_sign = -1;

  /// Throws std::invalid_argument unless inertia > 0, viscous >= 0 and
  /// damping_sign is +1 or -1.
  void validate() const;
};

struct ContinuousModel {
  Mat2 A = Mat2::Zero();
  Vec2 B = Vec2::Zero();
  Vec2 D = Vec2::Zero();
};

/// Zero-order-hold discretization of a ContinuousModel.
struct DiscreteModel {
  Mat2 A = Mat2::Identity();
  Vec2 B = Vec2::Zero();
  Vec2 D = Vec2::Zero();
  double Ts = 0.0;
};

struct State {
  double q = 0.0;     // rad
  double qdot = 0.0;  // rad/s

  Vec2 vec() const { return {q, qdot}; }
  static State from(const Vec2& v) { return {v[0], v[1]}; }
  bool finite() const;
};

struct PlantPair {
  ServoParams true_params;
  ServoParams nominal_params;
};

using TimeSignal = std::function<double(double t)>;
using StateSignal = std::function<double(double t, const State& x)>;

ContinuousModel build_continuous(const ServoParams& params);

/// Exact ZOH discretization for the servo family (A[0] = [0, 1], A[1][0] = 0).
/// Throws std::invalid_argument when Ts <= 0.
DiscreteModel discretize(const ContinuousModel& cm, double Ts);

/// (1 - e^{-x}) / x, continuous through x = 0.
double phi1(double x);
/// (x - 1 + e^{-x}) / x^2, continuous through x = 0.
double phi2(double x);

/// e^{A t} by scaling and squaring of a truncated Taylor series. Terms are
/// summed until the next term's max-norm falls below `tol`. Intended as an
/// independent reference for discretize(); not used on the hot path.
Mat2 matrix_exp_oracle(const Mat2& A, double t, double tol = 1e-18);

/// Scalar nominal disturbance that makes the nominal model reproduce the true
/// model's state derivative at (x, u, tau_d).
double nominal_disturbance(const State& x, double u, double tau_d,
                           const ContinuousModel& cm_true,
                           const ContinuousModel& cm_nom);

/// Integral of e^{A tau} D tau_dn((k+1)Ts - tau) over one sampling period,
/// by composite Simpson with `quad_points` panels (rounded up to even).
/// Throws std::invalid_argument when quad_points < 2 or Ts <= 0.
Vec2 exact_disturbance_input(const TimeSignal& tau_dn,
                             const ContinuousModel& cm_nom, long k, double Ts,
                             int quad_points = 64);

/// x' = A x + B u - D tau_dn.
State step_discrete(const DiscreteModel& dm, const State& x, double u,
                    double tau_dn);

/// Integrates the true continuous plant over [t0, t0 + Ts] with classical RK4
/// at dt = Ts / substeps, holding u constant.
State step_truth(const ServoParams& params, const State& x, double u_zoh,
                 const StateSignal& tau_d, double t0, double Ts,
                 int substeps = 10);

}  // namespace hpdob
