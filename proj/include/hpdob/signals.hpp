#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "hpdob/plant.hpp"

namespace hpdob {

struct DisturbanceSpec;

namespace disturbance {

struct Constant {
  double level = 0.0;
};

struct Ramp {
  double offset = 0.0;
  double slope = 0.0;
};

/// sum_i coefficients[i] * t^i
struct Poly {
  std::vector<double> coefficients;
};

struct Sine {
  double amplitude = 0.0;
  double frequency = 0.0;  // Hz
  double phase = 0.0;      // rad
};

struct SineSum {
  std::vector<Sine> terms;
};

/// extra_viscous * qdot + coulomb * sign(qdot) + quadratic_drag * qdot * |qdot|
struct StateDependent {
  double extra_viscous = 0.0;
  double coulomb = 0.0;
  double quadratic_drag = 0.0;
};

struct Sum {
  std::vector<DisturbanceSpec> terms;
};

}  // namespace disturbance

struct DisturbanceSpec {
  using Variant = std::variant<disturbance::Constant, disturbance::Ramp,
                               disturbance::Poly, disturbance::SineSum,
                               disturbance::StateDependent, disturbance::Sum>;
  Variant value;

  DisturbanceSpec() : value(disturbance::Constant{}) {}
  template <typename T>
  DisturbanceSpec(T v) : value(std::move(v)) {}  // NOLINT: implicit by design of the variant

  /// Throws std::invalid_argument on negative frequencies or empty composites.
  void validate() const;
};

namespace reference {

struct Step {
  double amplitude = 1.0;
  double start = 0.0;
};

struct Sine {
  double amplitude = 1.0;
  double frequency = 0.5;
};

struct Hold {
  double value = 0.0;
};

}  // namespace reference

struct ReferenceSpec {
  using Variant = std::variant<reference::Step, reference::Sine, reference::Hold>;
  Variant value;

  ReferenceSpec() : value(reference::Hold{}) {}
  template <typename T>
  ReferenceSpec(T v) : value(std::move(v)) {}  // NOLINT

  void validate() const;
};

struct ReferenceSample {
  double q = 0.0;
  double qdot = 0.0;
};

double eval_disturbance(const DisturbanceSpec& spec, double t, const State& x);
ReferenceSample eval_reference(const ReferenceSpec& spec, double t);

/// Two-tone sinusoid plus Coulomb and quadratic drag; the benchmark load.
DisturbanceSpec default_disturbance();
/// Step{1 rad at t = 0}.
ReferenceSpec regulation_reference();
/// Sine{1 rad, 0.5 Hz}.
ReferenceSpec tracking_reference();

}  // namespace hpdob
