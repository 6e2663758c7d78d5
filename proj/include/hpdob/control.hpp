#pragma once

#include <variant>

#include "hpdob/observers.hpp"
#include "hpdob/plant.hpp"
#include "hpdob/signals.hpp"

namespace hpdob {

struct PdGains {
  double Kp = 100.0;  // N m / rad
  double Kd = 10.0;   // N m s / rad

  void validate() const;
};

namespace mode {

struct PdOnly {};

struct PdPlusCdob {
  double g = 0.15;
};

struct PdPlusHpdob {
  int order = 1;
  double g_p = 0.15;
  double g_o = 0.15;
  CoeffMode coeff_mode = CoeffMode::Derived;
};

}  // namespace mode

using ControllerMode = std::variant<mode::PdOnly, mode::PdPlusCdob, mode::PdPlusHpdob>;

/// Throws std::invalid_argument on nonpositive observer gains or an
/// unsupported HPDOb order.
void validate_mode(const ControllerMode& m);

double pd_control(const ReferenceSample& ref, const State& x, const PdGains& gains);

/// Disturbance enters the plant as -D tau with B == D, so adding the estimate
/// to the command cancels it.
inline double compose_control(double u_pd, double tau_hat) { return u_pd + tau_hat; }

}  // namespace hpdob
