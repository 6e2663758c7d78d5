#include "hpdob/signals.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hpdob {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double signum(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

void DisturbanceSpec::validate() const {
  std::visit(Overloaded{
                 [](const disturbance::Constant& c) {
                   if (!std::isfinite(c.level)) throw std::invalid_argument("constant level must be finite");
                 },
                 [](const disturbance::Ramp& r) {
                   if (!std::isfinite(r.offset) || !std::isfinite(r.slope))
                     throw std::invalid_argument("ramp parameters must be finite");
                 },
                 [](const disturbance::Poly& p) {
                   if (p.coefficients.empty())
                     throw std::invalid_argument("poly needs at least one coefficient");
                 },
                 [](const disturbance::SineSum& s) {
                   if (s.terms.empty()) throw std::invalid_argument("sine_sum needs at least one term");
                   for (const auto& term : s.terms) {
                     if (!(term.frequency >= 0.0))
                       throw std::invalid_argument("sine frequency must be >= 0");
                   }
                 },
                 [](const disturbance::StateDependent&) {},
                 [](const disturbance::Sum& s) {
                   if (s.terms.empty()) throw std::invalid_argument("sum needs at least one term");
                   for (const auto& term : s.terms) term.validate();
                 },
             },
             value);
}

void ReferenceSpec::validate() const {
  if (const auto* s = std::get_if<reference::Sine>(&value); s && !(s->frequency >= 0.0)) {
    throw std::invalid_argument("reference frequency must be >= 0");
  }
}

double eval_disturbance(const DisturbanceSpec& spec, double t, const State& x) {
  return std::visit(
      Overloaded{
          [](const disturbance::Constant& c) { return c.level; },
          [t](const disturbance::Ramp& r) { return r.offset + r.slope * t; },
          [t](const disturbance::Poly& p) {
            double acc = 0.0;
            for (auto it = p.coefficients.rbegin(); it != p.coefficients.rend(); ++it) {
              acc = acc * t + *it;
            }
            return acc;
          },
          [t](const disturbance::SineSum& s) {
            double acc = 0.0;
            for (const auto& term : s.terms) {
              acc += term.amplitude * std::sin(kTwoPi * term.frequency * t + term.phase);
            }
            return acc;
          },
          [&x](const disturbance::StateDependent& d) {
            const double v = x.qdot;
            return d.extra_viscous * v + d.coulomb * signum(v) +
                   d.quadratic_drag * v * std::abs(v);
          },
          [t, &x](const disturbance::Sum& s) {
            double acc = 0.0;
            for (const auto& term : s.terms) acc += eval_disturbance(term, t, x);
            return acc;
          },
      },
      spec.value);
}

ReferenceSample eval_reference(const ReferenceSpec& spec, double t) {
  return std::visit(
      Overloaded{
          [t](const reference::Step& s) {
            return ReferenceSample{t >= s.start ? s.amplitude : 0.0, 0.0};
          },
          [t](const reference::Sine& s) {
            const double w = kTwoPi * s.frequency;
            return ReferenceSample{s.amplitude * std::sin(w * t), s.amplitude * w * std::cos(w * t)};
          },
          [](const reference::Hold& h) { return ReferenceSample{h.value, 0.0}; },
      },
      spec.value);
}

DisturbanceSpec default_disturbance() {
  return disturbance::Sum{{
      disturbance::SineSum{{{5.0, 1.0, 0.0}, {2.0, 3.0, std::numbers::pi / 4.0}}},
      disturbance::StateDependent{0.0, 0.5, 0.1},
  }};
}

ReferenceSpec regulation_reference() { return reference::Step{1.0, 0.0}; }

ReferenceSpec tracking_reference() { return reference::Sine{1.0, 0.5}; }

}  // namespace hpdob
