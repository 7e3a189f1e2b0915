#include "lspec/hanle.hpp"

#include <cmath>

#include "lspec/errors.hpp"

namespace lspec::hanle {

double ZeemanState::norm() const { return std::sqrt(std::norm(c_plus) + std::norm(c_minus)); }

void ZeemanState::validate() const {
  if (std::abs(std::norm(c_plus) + std::norm(c_minus) - 1.0) > 1e-12) {
    throw InvalidArgument("Zeeman state is not normalized");
  }
}

ZeemanState ZeemanState::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw InvalidArgument("cannot normalize the zero state");
  return {c_plus / n, c_minus / n};
}

void TransitionSigns::validate() const {
  if ((plus != 1 && plus != -1) || (minus != 1 && minus != -1)) {
    throw InvalidArgument("transition signs must be +1 or -1");
  }
}

TransitionSigns signs(Transition t) {
  return t == Transition::two_to_one ? TransitionSigns{1, -1} : TransitionSigns{1, 1};
}

ZeemanState dark_state(Transition t) {
  const double r = 1.0 / std::sqrt(2.0);
  return t == Transition::two_to_one ? ZeemanState{r, r} : ZeemanState{r, -r};
}

cplx overlap(const ZeemanState& s1, const ZeemanState& s2) {
  return std::conj(s1.c_plus) * s2.c_plus + std::conj(s1.c_minus) * s2.c_minus;
}

double brightness(const ZeemanState& state, const TransitionSigns& s) {
  s.validate();
  return std::abs(static_cast<double>(s.plus) * state.c_plus +
                  static_cast<double>(s.minus) * state.c_minus) /
         std::sqrt(2.0);
}

double brightness(const ZeemanState& state, Transition t) { return brightness(state, signs(t)); }

double zeeman_detuning(double field_tesla) { return 2.0 * bohr_magneton * field_tesla / hbar; }

}  // namespace lspec::hanle
