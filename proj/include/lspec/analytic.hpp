#pragma once

#include "lspec/model.hpp"

namespace lspec {

/// Parameters of the empirical resonance lineshape
///   f(d) = gt * (A*gt + B*(d - d0)) / (gt^2 + (d - d0)^2) + C.
struct LineshapeParams {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double gamma_tilde = 0.0;  ///< rad/s, > 0
  double delta0 = 0.0;       ///< rad/s
};

/// Amplitude/angle form: A = D cos(phi), B = D sin(phi).
struct PolarForm {
  double D = 0.0;
  double phi = 0.0;  ///< (-pi, pi]
  double C = 0.0;
};

/// Evaluates the empirical lineshape at two-photon detuning `delta`.
double lineshape(const LineshapeParams& p, double delta);

/// D = hypot(A, B), phi = atan2(B, A); A = B = 0 maps to (0, 0).
PolarForm to_polar(double A, double B, double C = 0.0);
LineshapeParams from_polar(const PolarForm& polar, double gamma_tilde, double delta0);

/// Absorption coefficient alpha(delta) (per metre) from the strong-drive closed
/// form, with the resonance centred at ac_stark_shift() and of width
/// resonance_width(). Throws DegenerateRates as population_differences().
double absorption_profile(const Rates& rates, const Fields& fields, const Medium& medium);

double ac_stark_shift(double big_delta, double omega_d, double gamma);
double resonance_width(double big_delta, double omega_d, double gamma, double gamma_bc);

/// Population redistribution factor eta in [1/2, 1].
double population_factor(const Rates& rates, const Fields& fields);

struct LineshapeCoefficients {
  double A;
  double B;
  double C;
  double eta;
};

/// Optically thin A, B, C and eta for a cell of length medium.length.
/// Throws DegenerateRates when gamma^2|Wd|^4 + gamma_bc^2 Delta^2 (gamma^2+Delta^2) == 0.
LineshapeCoefficients lineshape_coefficients(const Rates& rates, const Fields& fields,
                                             const Medium& medium);

struct SignChange {
  double numeric;      ///< bisection root of A(Delta) on [0, 10 gamma]
  double approximate;  ///< gamma - 2 gamma_bc gamma^2 / |Omega_d|^2
};

/// Positive one-photon detuning where the symmetric amplitude A changes sign.
/// Throws NoSignChange when A(0) <= 0 or A keeps its sign on the bracket.
SignChange sign_change_detuning(const Rates& rates, const Fields& fields);

/// Density-narrowed width near one-photon resonance:
///   |Wd|^2 / sqrt(gamma gamma_r) * ((3/8pi) N lambda^2 L)^(-1/2) * exp(Delta^2 / (2 (ku)^2)).
/// At Delta = 0 this is the optically-thick EIT width; the exponential models
/// the depletion of the resonant velocity group.
double density_narrowed_width(const Medium& medium, const Rates& rates, const Fields& fields);

}  // namespace lspec
