#pragma once

#include <array>

#include "hpdob/plant.hpp"

namespace hpdob {

/// Observer gain vector L together with the scalar g it was tuned from.
struct ObserverGain {
  Vec2 L = Vec2::Zero();
  double g = 0.0;
};

/// Coefficients used by the second-order disturbance-variation model.
///  - Derived: 3/2, -2, 1/2 (consistent with a second-order Taylor step).
///  - PaperLiteral: 3/2, -2, 3/2 (does not vanish on constant sequences).
enum class CoeffMode { Derived, PaperLiteral };

struct CdobState {
  double z_hat = 0.0;
};

/// Predictor history, newest first. Only the first `filled_count` entries are
/// meaningful.
struct PredictorHistory {
  std::array<double, 3> values{};
  int filled_count = 0;

  void push(double v);
};

struct PredictorState {
  double z_hat_p = 0.0;
  PredictorHistory history;
};

struct HpdobState {
  double z_hat_o = 0.0;
  int order = 1;
  CoeffMode coeff_mode = CoeffMode::Derived;
};

struct DerivativeEstimates {
  double d1 = 0.0;
  double d2 = 0.0;
};

template <typename S>
struct ObserverStep {
  S state;
  double tau_hat = 0.0;
};

/// L = g / |D_d|_1 * [1, 1]. Throws std::invalid_argument when D_d is zero.
ObserverGain tune_gain(double g, const Vec2& D_d);

/// |1 - L^T D_d|; the error recursion contracts iff this is < 1.
double contraction_factor(const ObserverGain& gain, const Vec2& D_d);

/// Disturbance estimate z_hat - L^T x available at the sample instant, before
/// the control input for that instant is known.
double auxiliary_estimate(double z_hat, const State& x, const ObserverGain& gain);

/// One step of the auxiliary-variable recursion shared by all three observers:
///   (1 - L^T D) z + L^T (A + D L^T - I) x + L^T B u + delta
double advance_auxiliary(double z_hat, const State& x, double u,
                         const DiscreteModel& dm, const ObserverGain& gain,
                         double delta = 0.0);

/// Conventional DOB. Returns the state at k+1 and the estimate at k, which is
/// taken from the pre-update state.
ObserverStep<CdobState> cdob_update(const CdobState& s, const State& x, double u,
                                    const DiscreteModel& dm, const ObserverGain& gain);

/// Same recursion as cdob_update with the predictor gain; also pushes the
/// time-k prediction into the history ring.
ObserverStep<PredictorState> predictor_update(const PredictorState& s, const State& x,
                                              double u, const DiscreteModel& dm,
                                              const ObserverGain& gain_p);

/// Backward differences of the predictor history. Missing derivatives (not
/// enough history yet) are reported as 0.
DerivativeEstimates derivative_estimates(const PredictorHistory& h, double Ts);

/// Predicted change of the nominal disturbance over the next sampling period.
/// Returns 0 until the history holds order + 1 entries.
double delta_estimate(const PredictorHistory& h, int order, CoeffMode mode);

/// HPDOb step: the conventional recursion plus the supplied variation
/// estimate. With delta_hat == 0 this is bitwise identical to cdob_update.
ObserverStep<HpdobState> hpdob_update(const HpdobState& s, const State& x, double u,
                                      double delta_hat, const DiscreteModel& dm,
                                      const ObserverGain& gain_o);

}  // namespace hpdob
