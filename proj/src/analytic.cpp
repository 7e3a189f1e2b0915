#include "lspec/analytic.hpp"

#include <cmath>
#include <numbers>

namespace lspec {

double lineshape(const LineshapeParams& p, double delta) {
  const double x = delta - p.delta0;
  const double g = p.gamma_tilde;
  return g * (p.A * g + p.B * x) / (g * g + x * x) + p.C;
}

PolarForm to_polar(double A, double B, double C) {
  if (A == 0.0 && B == 0.0) return {0.0, 0.0, C};
  double phi = std::atan2(B, A);
  // atan2 returns -pi for (negative, -0.0); keep the half-open range (-pi, pi].
  if (phi == -std::numbers::pi) phi = std::numbers::pi;
  return {std::hypot(A, B), phi, C};
}

LineshapeParams from_polar(const PolarForm& polar, double gamma_tilde, double delta0) {
  return {polar.D * std::cos(polar.phi), polar.D * std::sin(polar.phi), polar.C, gamma_tilde,
          delta0};
}

double ac_stark_shift(double big_delta, double omega_d, double gamma) {
  return omega_d * omega_d * big_delta / (gamma * gamma + big_delta * big_delta);
}

double resonance_width(double big_delta, double omega_d, double gamma, double gamma_bc) {
  const double g2 = gamma * gamma;
  const double d2 = big_delta * big_delta;
  const double w4 = std::pow(omega_d, 4);
  return std::sqrt(g2 * w4 + gamma_bc * gamma_bc * d2 * (g2 + d2)) / (g2 + d2);
}

double population_factor(const Rates& rates, const Fields& fields) {
  return -population_differences(rates, fields).aa_minus_bb;
}

double absorption_profile(const Rates& rates, const Fields& fields, const Medium& medium) {
  const double g = rates.gamma();
  const double gbc = rates.gamma_bc;
  const double w2 = fields.omega_d * fields.omega_d;
  const double d2 = fields.big_delta * fields.big_delta;
  const double eta = population_factor(rates, fields);
  const double d0 = ac_stark_shift(fields.big_delta, fields.omega_d, g);
  const double gt = resonance_width(fields.big_delta, fields.omega_d, g, gbc);
  const double x = fields.small_delta - d0;
  const double sd = fields.small_delta;
  return kappa(medium, rates) / (g * g + d2) * eta * (gbc * w2 + g * sd * sd) / (gt * gt + x * x);
}

LineshapeCoefficients lineshape_coefficients(const Rates& rates, const Fields& fields,
                                             const Medium& medium) {
  const double g = rates.gamma();
  const double gbc = rates.gamma_bc;
  const double w2 = fields.omega_d * fields.omega_d;
  const double d2 = fields.big_delta * fields.big_delta;
  const double sum = g * g + d2;
  const double den = g * g * w2 * w2 + gbc * gbc * d2 * sum;
  if (den == 0.0) {
    throw DegenerateRates("gamma^2|Omega_d|^4 + gamma_bc^2 Delta^2 (gamma^2 + Delta^2) vanishes");
  }
  const double eta = population_factor(rates, fields);
  const double kl = kappa(medium, rates) * medium.length;
  const double A = kl * eta * w2 / sum * (g * w2 * (g * g - d2) - gbc * sum * sum) / den;
  const double B = -kl * eta * fields.big_delta / sum;
  const double C = 1.0 - kl * eta * g / sum;
  return {A, B, C, eta};
}

SignChange sign_change_detuning(const Rates& rates, const Fields& fields) {
  const double g = rates.gamma();
  const double w2 = fields.omega_d * fields.omega_d;
  const double approx = w2 > 0.0 ? g - 2.0 * rates.gamma_bc * g * g / w2 : -INFINITY;

  // Sign of A(Delta) is the sign of its bracketed numerator; kappa, L and eta
  // are positive and drop out.
  auto numerator = [&](double d) {
    const double sum = g * g + d * d;
    return g * w2 * (g * g - d * d) - rates.gamma_bc * sum * sum;
  };

  double lo = 0.0;
  double hi = 10.0 * g;
  if (!(numerator(lo) > 0.0)) {
    throw NoSignChange("symmetric amplitude A is not positive at Delta = 0");
  }
  if (!(numerator(hi) < 0.0)) {
    throw NoSignChange("symmetric amplitude A keeps its sign on [0, 10 gamma]");
  }
  const double tol = 1e-9 * g;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (numerator(mid) > 0.0 ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi), approx};
}

double density_narrowed_width(const Medium& medium, const Rates& rates, const Fields& fields) {
  const double g = rates.gamma();
  const double w2 = fields.omega_d * fields.omega_d;
  const double optical_depth =
      3.0 / (8.0 * std::numbers::pi) * medium.density * medium.wavelength * medium.wavelength *
      medium.length;
  if (!(optical_depth > 0.0) || !(g * rates.gamma_r > 0.0)) {
    throw InvalidArgument("density_narrowed_width requires N L > 0 and gamma gamma_r > 0");
  }
  const double at_resonance = w2 / std::sqrt(g * rates.gamma_r) / std::sqrt(optical_depth);
  if (medium.ku == 0.0) return fields.big_delta == 0.0 ? at_resonance : INFINITY;
  const double r = fields.big_delta / medium.ku;
  return at_resonance * std::exp(0.5 * r * r);
}

}  // namespace lspec
