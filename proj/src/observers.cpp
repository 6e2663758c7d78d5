#include "hpdob/observers.hpp"

#include <cmath>
#include <stdexcept>

namespace hpdob {

void PredictorHistory::push(double v) {
  values[2] = values[1];
  values[1] = values[0];
  values[0] = v;
  if (filled_count < 3) ++filled_count;
}

ObserverGain tune_gain(double g, const Vec2& D_d) {
  const double l1 = D_d.cwiseAbs().sum();
  if (!(l1 > 0.0)) {
    throw std::invalid_argument("cannot tune an observer gain for a zero disturbance input vector");
  }
  return {Vec2::Constant(g / l1), g};
}

double contraction_factor(const ObserverGain& gain, const Vec2& D_d) {
  return std::abs(1.0 - gain.L.dot(D_d));
}

double auxiliary_estimate(double z_hat, const State& x, const ObserverGain& gain) {
  return z_hat - gain.L.dot(x.vec());
}

double advance_auxiliary(double z_hat, const State& x, double u,
                         const DiscreteModel& dm, const ObserverGain& gain,
                         double delta) {
  const Vec2& L = gain.L;
  const Vec2 xv = x.vec();
  const Mat2 closed = dm.A + dm.D * L.transpose() - Mat2::Identity();
  return (1.0 - L.dot(dm.D)) * z_hat + L.dot(closed * xv) + L.dot(dm.B) * u + delta;
}

ObserverStep<CdobState> cdob_update(const CdobState& s, const State& x, double u,
                                    const DiscreteModel& dm, const ObserverGain& gain) {
  const double tau_hat = auxiliary_estimate(s.z_hat, x, gain);
  return {CdobState{advance_auxiliary(s.z_hat, x, u, dm, gain)}, tau_hat};
}

ObserverStep<PredictorState> predictor_update(const PredictorState& s, const State& x,
                                              double u, const DiscreteModel& dm,
                                              const ObserverGain& gain_p) {
  const double tau_hat_p = auxiliary_estimate(s.z_hat_p, x, gain_p);
  PredictorState next = s;
  next.z_hat_p = advance_auxiliary(s.z_hat_p, x, u, dm, gain_p);
  next.history.push(tau_hat_p);
  return {next, tau_hat_p};
}

DerivativeEstimates derivative_estimates(const PredictorHistory& h, double Ts) {
  DerivativeEstimates d;
  const auto& v = h.values;
  if (h.filled_count >= 2) d.d1 = (v[0] - v[1]) / Ts;
  if (h.filled_count >= 3) d.d2 = (v[0] - 2.0 * v[1] + v[2]) / (Ts * Ts);
  return d;
}

double delta_estimate(const PredictorHistory& h, int order, CoeffMode mode) {
  if (order != 1 && order != 2) {
    throw std::invalid_argument("delta_estimate supports order 1 or 2");
  }
  if (h.filled_count < order + 1) return 0.0;
  const auto& v = h.values;
  if (order == 1) return v[0] - v[1];
  const double oldest = mode == CoeffMode::Derived ? 0.5 : 1.5;
  return 1.5 * v[0] - 2.0 * v[1] + oldest * v[2];
}

ObserverStep<HpdobState> hpdob_update(const HpdobState& s, const State& x, double u,
                                      double delta_hat, const DiscreteModel& dm,
                                      const ObserverGain& gain_o) {
  const double tau_hat = auxiliary_estimate(s.z_hat_o, x, gain_o);
  HpdobState next = s;
  next.z_hat_o = advance_auxiliary(s.z_hat_o, x, u, dm, gain_o, delta_hat);
  return {next, tau_hat};
}

}  // namespace hpdob
