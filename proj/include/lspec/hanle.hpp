#pragma once

#include <array>
#include <complex>

namespace lspec::hanle {

using cplx = std::complex<double>;

/// Ground-state superposition c_plus |m=+1> + c_minus |m=-1>.
struct ZeemanState {
  cplx c_plus;
  cplx c_minus;

  double norm() const;
  /// Throws InvalidArgument unless |c_plus|^2 + |c_minus|^2 = 1 within 1e-12.
  void validate() const;
  ZeemanState normalized() const;
};

enum class Transition { two_to_one, two_to_two };

/// Relative signs of the sigma+ and sigma- matrix elements from |+1> and |-1>.
struct TransitionSigns {
  int plus = 1;
  int minus = 1;

  void validate() const;
};

/// Sign pattern of the F=2 -> F'=1 (+, -) and F=2 -> F'=2 (+, +) couplings.
TransitionSigns signs(Transition t);

/// The superposition uncoupled from transition `t`:
/// (|+1> + |-1>)/sqrt(2) for two_to_one, (|+1> - |-1>)/sqrt(2) for two_to_two.
ZeemanState dark_state(Transition t);

/// <s1|s2>
cplx overlap(const ZeemanState& s1, const ZeemanState& s2);

/// |plus c_plus + minus c_minus| / sqrt(2), in [0, 1] for normalized states.
double brightness(const ZeemanState& state, const TransitionSigns& signs);
double brightness(const ZeemanState& state, Transition t);

/// Two-photon detuning (rad/s) produced by a magnetic field in tesla: 2 mu_B B / hbar.
double zeeman_detuning(double field_tesla);

inline constexpr double bohr_magneton = 9.2740100783e-24;  ///< J/T
inline constexpr double hbar = 1.054571817e-34;            ///< J s

}  // namespace lspec::hanle
