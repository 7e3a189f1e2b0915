#pragma once

#include <array>
#include <span>

#include "lspec/analytic.hpp"
#include "lspec/propagation.hpp"

namespace lspec {

struct FitOptions {
  int max_iterations = 200;
  double step_tolerance = 1e-10;      ///< relative parameter step
  double gradient_tolerance = 1e-12;  ///< on the scaled problem
  double initial_damping = 1e-3;
  double damping_factor = 10.0;
};

struct FitResult {
  LineshapeParams params;
  PolarForm polar;
  double residual_rms = 0.0;
  bool converged = false;
  int iterations = 0;
  /// variance estimates for (A, B, C, gamma_tilde, delta0)
  std::array<double, 5> covariance_diagonal{};
};

/// Partial derivatives of lineshape() with respect to (A, B, C, gamma_tilde, delta0).
std::array<double, 5> lineshape_jacobian(const LineshapeParams& p, double delta);

/// Starting point for fit_lineshape. Throws DegenerateSpectrum for flat input.
LineshapeParams initial_guess(std::span<const double> delta, std::span<const double> values);
LineshapeParams initial_guess(const Spectrum& spectrum);

/// Least-squares fit of the empirical lineshape with uniform weights.
/// Needs at least 7 points; throws DegenerateSpectrum when the variance of the
/// values is below 1e-12. Non-convergence is reported via `converged`.
FitResult fit_lineshape(std::span<const double> delta, std::span<const double> values,
                        const FitOptions& options = {});
FitResult fit_lineshape(const Spectrum& spectrum, const FitOptions& options = {});

}  // namespace lspec
