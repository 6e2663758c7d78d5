#include "hpdob/control.hpp"

#include <cmath>
#include <stdexcept>

namespace hpdob {

void PdGains::validate() const {
  if (!(Kp >= 0.0) || !(Kd >= 0.0) || !std::isfinite(Kp) || !std::isfinite(Kd)) {
    throw std::invalid_argument("PD gains must be finite and non-negative");
  }
}

void validate_mode(const ControllerMode& m) {
  if (const auto* c = std::get_if<mode::PdPlusCdob>(&m)) {
    if (!(c->g > 0.0) || !std::isfinite(c->g)) {
      throw std::invalid_argument("observer gain g must be positive");
    }
  } else if (const auto* h = std::get_if<mode::PdPlusHpdob>(&m)) {
    if (!(h->g_p > 0.0) || !(h->g_o > 0.0) || !std::isfinite(h->g_p) || !std::isfinite(h->g_o)) {
      throw std::invalid_argument("observer gains g_p and g_o must be positive");
    }
    if (h->order != 1 && h->order != 2) {
      throw std::invalid_argument("HPDOb order must be 1 or 2");
    }
  }
}

double pd_control(const ReferenceSample& ref, const State& x, const PdGains& gains) {
  return gains.Kp * (ref.q - x.q) + gains.Kd * (ref.qdot - x.qdot);
}

}  // namespace hpdob
