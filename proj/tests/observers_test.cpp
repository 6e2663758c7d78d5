#include "hpdob/observers.hpp"

#include <cmath>
#include <cstring>
#include <functional>
#include <vector>

#include <gtest/gtest.h>

#include "hpdob/control.hpp"

namespace hpdob {
namespace {

DiscreteModel servo_dm() { return discretize(build_continuous({}), 1e-4); }

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

// Matched discrete plant under PD + cancellation, driven by a per-step
// nominal disturbance sequence. Returns e(k) = tau(k) - tau_hat(k) for the
// chosen observer, where `delta_for` supplies the variation estimate fed to
// the HPDOb recursion (nullptr selects the conventional DOB).
struct LoopResult {
  std::vector<double> err;
  std::vector<double> delta_hat;
};

LoopResult drive(double g, const std::function<double(long)>& tau, long steps,
                 const std::function<double(long, const PredictorHistory&)>& delta_for = nullptr,
                 double g_p = -1.0) {
  const DiscreteModel dm = servo_dm();
  const ObserverGain gain = tune_gain(g, dm.D);
  const ObserverGain gain_p = tune_gain(g_p > 0 ? g_p : g, dm.D);
  CdobState cdob;
  PredictorState pred;
  HpdobState hp;
  State x;
  LoopResult out;
  for (long k = 0; k < steps; ++k) {
    const double z = delta_for ? hp.z_hat_o : cdob.z_hat;
    const double tau_hat = auxiliary_estimate(z, x, gain);
    out.err.push_back(tau(k) - tau_hat);
    const double u = compose_control(pd_control({}, x, PdGains{}), tau_hat);
    if (delta_for) {
      pred = predictor_update(pred, x, u, dm, gain_p).state;
      const double d = delta_for(k, pred.history);
      out.delta_hat.push_back(d);
      hp = hpdob_update(hp, x, u, d, dm, gain).state;
    } else {
      cdob = cdob_update(cdob, x, u, dm, gain).state;
    }
    x = step_discrete(dm, x, u, tau(k));
  }
  return out;
}

TEST(TuneGain, Examples) {
  const Vec2 D = servo_dm().D;
  EXPECT_EQ(tune_gain(0.0, D).L, Vec2::Zero());
  const ObserverGain L = tune_gain(0.15, D);
  // 0.15 / (D[0] + D[1]) from the high-precision discretization values.
  EXPECT_NEAR(L.L[0], 187.4940002639886, 1e-9);
  EXPECT_EQ(L.L[0], L.L[1]);
  EXPECT_EQ(L.g, 0.15);
  EXPECT_NEAR(L.L.dot(D), 0.15, 1e-16);
}

TEST(TuneGain, RejectsZeroInputVector) {
  EXPECT_THROW(tune_gain(0.15, Vec2::Zero()), std::invalid_argument);
}

TEST(TuneGain, UsesAbsoluteSum) {
  const ObserverGain L = tune_gain(1.0, Vec2(-1.0, 3.0));
  EXPECT_DOUBLE_EQ(L.L[0], 0.25);
}

TEST(ContractionFactor, Examples) {
  const Vec2 D = servo_dm().D;
  EXPECT_EQ(contraction_factor(ObserverGain{}, D), 1.0);
  EXPECT_NEAR(contraction_factor(tune_gain(0.15, D), D), 0.85, 1e-15);
  EXPECT_NEAR(contraction_factor(tune_gain(2.1, D), D), 1.1, 1e-15);
  EXPECT_LT(contraction_factor(tune_gain(1.9, D), D), 1.0);
}

TEST(CdobUpdate, Quiescent) {
  const auto step = cdob_update({}, {}, 0.0, servo_dm(), tune_gain(0.15, servo_dm().D));
  EXPECT_EQ(step.state.z_hat, 0.0);
  EXPECT_EQ(step.tau_hat, 0.0);
}

TEST(CdobUpdate, EstimateUsesPreUpdateState) {
  const DiscreteModel dm = servo_dm();
  const ObserverGain gain = tune_gain(0.3, dm.D);
  const State x{0.01, -0.2};
  const auto step = cdob_update(CdobState{1.25}, x, 3.0, dm, gain);
  EXPECT_EQ(step.tau_hat, 1.25 - gain.L.dot(x.vec()));
  EXPECT_EQ(step.state.z_hat, advance_auxiliary(1.25, x, 3.0, dm, gain));
}

TEST(CdobUpdate, ConstantDisturbanceDecaysGeometrically) {
  for (double g : {0.15, 0.5, 1.0, 1.7}) {
    const auto r = drive(g, [](long) { return 2.0; }, 400);
    const double e0 = r.err[0];
    ASSERT_EQ(e0, 2.0);
    for (long k = 0; k < 400; ++k) {
      EXPECT_NEAR(r.err[k], std::pow(1.0 - g, k) * e0, 1e-10) << "g=" << g << " k=" << k;
    }
  }
}

TEST(CdobUpdate, RampSteadyStateIsIncrementOverGain) {
  const double delta = 1e-3;
  const double g = 0.25;
  const auto r = drive(g, [delta](long k) { return 0.2 + delta * k; }, 4000);
  EXPECT_NEAR(r.err.back(), delta / g, 1e-6 * delta / g);
}

TEST(CdobUpdate, UnstableGainDiverges) {
  const auto r = drive(2.1, [](long) { return 1.0; }, 200);
  double peak = 0.0;
  for (double e : r.err) peak = std::max(peak, std::abs(e));
  EXPECT_GT(peak, 1e6);
}

TEST(PredictorUpdate, MatchesConventionalObserver) {
  const DiscreteModel dm = servo_dm();
  const ObserverGain gain = tune_gain(0.2, dm.D);
  CdobState c{0.4};
  PredictorState p;
  p.z_hat_p = 0.4;
  for (int k = 0; k < 50; ++k) {
    const State x{0.001 * k, std::sin(0.1 * k)};
    const double u = std::cos(0.3 * k);
    const auto sc = cdob_update(c, x, u, dm, gain);
    const auto sp = predictor_update(p, x, u, dm, gain);
    EXPECT_TRUE(same_bits(sc.tau_hat, sp.tau_hat));
    EXPECT_TRUE(same_bits(sc.state.z_hat, sp.state.z_hat_p));
    EXPECT_EQ(sp.state.history.values[0], sp.tau_hat);
    c = sc.state;
    p = sp.state;
  }
}

TEST(PredictorUpdate, FillsHistoryRing) {
  const DiscreteModel dm = servo_dm();
  const ObserverGain gain = tune_gain(0.2, dm.D);
  PredictorState p;
  EXPECT_EQ(p.history.filled_count, 0);
  for (int expected : {1, 2, 3, 3, 3}) {
    p = predictor_update(p, {}, 0.0, dm, gain).state;
    EXPECT_EQ(p.history.filled_count, expected);
  }
}

TEST(PredictorUpdate, ConstantDisturbanceHistoryConverges) {
  // The predictor shares the conventional recursion, so its history settles
  // on the constant.
  PredictorHistory last;
  drive(0.5, [](long) { return 1.5; }, 200, [&last](long, const PredictorHistory& h) {
    last = h;
    return 0.0;
  });
  for (double v : last.values) EXPECT_NEAR(v, 1.5, 1e-12);
}

TEST(DerivativeEstimates, Examples) {
  PredictorHistory h;
  for (double v : {3.0, 3.0, 3.0}) h.push(v);
  auto d = derivative_estimates(h, 0.1);
  EXPECT_EQ(d.d1, 0.0);
  EXPECT_EQ(d.d2, 0.0);

  PredictorHistory affine;
  for (double v : {0.0, 0.5, 1.0}) affine.push(v);
  d = derivative_estimates(affine, 1.0);
  EXPECT_EQ(d.d1, 0.5);
  EXPECT_EQ(d.d2, 0.0);

  PredictorHistory quad;
  for (double v : {0.0, 1.0, 4.0}) quad.push(v);
  d = derivative_estimates(quad, 1.0);
  EXPECT_EQ(d.d1, 3.0);
  EXPECT_EQ(d.d2, 2.0);
}

TEST(DerivativeEstimates, WarmUpReportsZero) {
  PredictorHistory h;
  h.push(5.0);
  auto d = derivative_estimates(h, 1e-4);
  EXPECT_EQ(d.d1, 0.0);
  EXPECT_EQ(d.d2, 0.0);
  h.push(6.0);
  d = derivative_estimates(h, 1.0);
  EXPECT_EQ(d.d1, 1.0);
  EXPECT_EQ(d.d2, 0.0);
}

TEST(DeltaEstimate, ConstantHistory) {
  PredictorHistory h;
  for (int i = 0; i < 3; ++i) h.push(2.0);
  EXPECT_EQ(delta_estimate(h, 1, CoeffMode::Derived), 0.0);
  EXPECT_EQ(delta_estimate(h, 2, CoeffMode::Derived), 0.0);
  EXPECT_EQ(delta_estimate(h, 2, CoeffMode::PaperLiteral), 2.0);
}

TEST(DeltaEstimate, AffineHistory) {
  const double d = 0.37;
  PredictorHistory h;
  for (double v : {0.0, d, 2 * d}) h.push(v);
  EXPECT_DOUBLE_EQ(delta_estimate(h, 1, CoeffMode::Derived), d);
  EXPECT_DOUBLE_EQ(delta_estimate(h, 2, CoeffMode::Derived), d);
}

TEST(DeltaEstimate, QuadraticResidualIsHalfSecondDifference) {
  // History k^2 at k = 0, 1, 2; next increment 3^2 - 2^2 = 5.
  PredictorHistory h;
  for (double v : {0.0, 1.0, 4.0}) h.push(v);
  const double est = delta_estimate(h, 2, CoeffMode::Derived);
  EXPECT_EQ(est, 4.0);
  const double second_diff = derivative_estimates(h, 1.0).d2;
  EXPECT_EQ(5.0 - est, 0.5 * second_diff);
}

TEST(DeltaEstimate, WarmUpReturnsZero) {
  PredictorHistory h;
  h.push(1.0);
  EXPECT_EQ(delta_estimate(h, 1, CoeffMode::Derived), 0.0);
  h.push(3.0);
  EXPECT_EQ(delta_estimate(h, 1, CoeffMode::Derived), 2.0);
  EXPECT_EQ(delta_estimate(h, 2, CoeffMode::Derived), 0.0);
  EXPECT_EQ(delta_estimate(h, 2, CoeffMode::PaperLiteral), 0.0);
}

TEST(DeltaEstimate, RejectsUnsupportedOrder) {
  EXPECT_THROW(delta_estimate({}, 3, CoeffMode::Derived), std::invalid_argument);
}

TEST(HpdobUpdate, ZeroDeltaReducesToConventionalBitwise) {
  const DiscreteModel dm = servo_dm();
  const ObserverGain gain = tune_gain(0.35, dm.D);
  CdobState c{0.1};
  HpdobState h{0.1, 1, CoeffMode::Derived};
  for (int k = 0; k < 200; ++k) {
    const State x{std::sin(0.01 * k), 0.3 * std::cos(0.02 * k)};
    const double u = 5.0 * std::sin(0.05 * k);
    const auto sc = cdob_update(c, x, u, dm, gain);
    const auto sh = hpdob_update(h, x, u, 0.0, dm, gain);
    EXPECT_TRUE(same_bits(sc.tau_hat, sh.tau_hat));
    EXPECT_TRUE(same_bits(sc.state.z_hat, sh.state.z_hat_o));
    c = sc.state;
    h = sh.state;
  }
}

TEST(HpdobUpdate, OracleDeltaGivesGeometricDecay) {
  const auto tau = [](long k) {
    const double t = 1e-4 * k;
    return 3.0 * std::sin(2 * M_PI * 2.0 * t) + std::exp(t) + 0.5 * std::cos(2 * M_PI * 7.0 * t);
  };
  const double g = 0.3;
  const auto r = drive(g, tau, 600, [&tau](long k, const PredictorHistory&) {
    return tau(k + 1) - tau(k);
  });
  for (long k = 0; k < 600; ++k) {
    const double expected = std::pow(1.0 - g, k) * r.err[0];
    EXPECT_LE(std::abs(r.err[k] - expected), 1e-9 * std::abs(r.err[0])) << k;
  }
}

TEST(HpdobUpdate, FirstOrderAnnihilatesRamp) {
  const double delta = 2e-3;
  const auto r = drive(0.15, [delta](long k) { return -0.5 + delta * k; }, 3000,
                       [](long, const PredictorHistory& h) {
                         return delta_estimate(h, 1, CoeffMode::Derived);
                       });
  EXPECT_LT(std::abs(r.err.back()), 1e-9);
}

TEST(HpdobUpdate, SecondOrderBeatsFirstOnQuadratic) {
  const auto tau = [](long k) { return 1e-6 * static_cast<double>(k) * k; };
  const auto run = [&tau](int order) {
    return drive(0.15, tau, 3000, [order](long, const PredictorHistory& h) {
             return delta_estimate(h, order, CoeffMode::Derived);
           })
        .err.back();
  };
  const double e1 = std::abs(run(1));
  const double e2 = std::abs(run(2));
  EXPECT_GT(e1, 0.0);
  EXPECT_LT(e2, e1);
}

TEST(HpdobUpdate, WarmUpMatchesConventional) {
  const auto tau = [](long k) { return 0.1 * k * k; };
  const auto conv = drive(0.2, tau, 4);
  for (int order : {1, 2}) {
    const auto hp = drive(0.2, tau, 4, [order](long, const PredictorHistory& h) {
      return delta_estimate(h, order, CoeffMode::Derived);
    });
    for (int k = 0; k < order; ++k) EXPECT_EQ(hp.delta_hat[k], 0.0);
    // The estimate at k depends on deltas up to k - 1.
    for (int k = 0; k <= order; ++k) EXPECT_TRUE(same_bits(hp.err[k], conv.err[k])) << k;
  }
}

TEST(PredictorHistory, NewestFirst) {
  PredictorHistory h;
  h.push(1.0);
  h.push(2.0);
  h.push(3.0);
  h.push(4.0);
  EXPECT_EQ(h.values[0], 4.0);
  EXPECT_EQ(h.values[1], 3.0);
  EXPECT_EQ(h.values[2], 2.0);
  EXPECT_EQ(h.filled_count, 3);
}

}  // namespace
}  // namespace hpdob
