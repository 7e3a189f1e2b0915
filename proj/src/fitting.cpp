#include "lspec/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/QR>

namespace lspec {

namespace {

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

void check_data(std::span<const double> delta, std::span<const double> values, std::size_t min) {
  if (delta.size() != values.size()) throw InvalidArgument("grid and values differ in length");
  if (delta.size() < min) {
    throw InvalidArgument("spectrum needs at least " + std::to_string(min) + " points");
  }
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (!std::isfinite(delta[i]) || !std::isfinite(values[i])) {
      throw InvalidArgument("spectrum contains non-finite values");
    }
    if (i > 0 && !(delta[i] > delta[i - 1])) {
      throw InvalidArgument("grid must be strictly increasing");
    }
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= values.size();
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= values.size();
  if (var < 1e-12) throw DegenerateSpectrum("spectrum is flat (variance below 1e-12)");
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double interpolate(std::span<const double> x, std::span<const double> y, double at) {
  if (at <= x.front()) return y.front();
  if (at >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), at);
  const std::size_t i = static_cast<std::size_t>(it - x.begin());
  const double t = (at - x[i - 1]) / (x[i] - x[i - 1]);
  return y[i - 1] + t * (y[i] - y[i - 1]);
}

// Half width at half of r[e], walking outwards from e.
double half_width(std::span<const double> x, const std::vector<double>& r, std::size_t e) {
  const double half = 0.5 * r[e];
  auto crossing = [&](int dir) -> double {
    for (long i = static_cast<long>(e); i + dir >= 0 && i + dir < static_cast<long>(r.size());
         i += dir) {
      const long j = i + dir;
      if (std::abs(r[j]) <= std::abs(half) || r[j] * half < 0.0) {
        const double t = (r[i] - half) / (r[i] - r[j]);
        return std::abs(x[i] + t * (x[j] - x[i]) - x[e]);
      }
    }
    return -1.0;
  };
  const double left = crossing(-1), right = crossing(+1);
  if (left > 0.0 && right > 0.0) return 0.5 * (left + right);
  if (left > 0.0) return left;
  if (right > 0.0) return right;
  return 0.1 * (x.back() - x.front());
}

struct Scaled {
  double origin;
  double scale;
};

// Model in scaled coordinates u = (delta - origin) / scale with
// q = (A, B, C, log(gamma_tilde / scale), delta0 scaled).
double model(const Vec5& q, double u, Vec5* grad) {
  const double g = std::exp(q(3));
  const double x = u - q(4);
  const double Q = g * g + x * x;
  const double num = g * (q(0) * g + q(1) * x);
  if (grad) {
    (*grad)(0) = g * g / Q;
    (*grad)(1) = g * x / Q;
    (*grad)(2) = 1.0;
    const double dg = (2.0 * q(0) * g + q(1) * x) / Q - num * 2.0 * g / (Q * Q);
    (*grad)(3) = g * dg;
    const double dx = q(1) * g / Q - num * 2.0 * x / (Q * Q);
    (*grad)(4) = -dx;
  }
  return num / Q + q(2);
}

}  // namespace

std::array<double, 5> lineshape_jacobian(const LineshapeParams& p, double delta) {
  const double g = p.gamma_tilde;
  const double x = delta - p.delta0;
  const double Q = g * g + x * x;
  const double num = g * (p.A * g + p.B * x);
  const double dg = (2.0 * p.A * g + p.B * x) / Q - num * 2.0 * g / (Q * Q);
  const double dx = p.B * g / Q - num * 2.0 * x / (Q * Q);
  return {g * g / Q, g * x / Q, 1.0, dg, -dx};
}

LineshapeParams initial_guess(std::span<const double> delta, std::span<const double> values) {
  check_data(delta, values, 1);
  const std::size_t n = values.size();
  const std::size_t outer = std::max<std::size_t>(1, n / 20);
  std::vector<double> edge;
  for (std::size_t i = 0; i < outer; ++i) {
    edge.push_back(values[i]);
    edge.push_back(values[n - 1 - i]);
  }
  const double C = median(edge);

  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = values[i] - C;
  const std::size_t imax = std::max_element(r.begin(), r.end()) - r.begin();
  const std::size_t imin = std::min_element(r.begin(), r.end()) - r.begin();
  const double rmax = std::max(r[imax], 0.0), rmin = std::min(r[imin], 0.0);
  const double D = rmax - rmin;
  const double c = (rmax + rmin) / D;

  LineshapeParams p;
  p.C = C;
  if (std::abs(c) > 0.9) {
    // Nearly symmetric: one dominant extremum.
    const std::size_t e = c > 0.0 ? imax : imin;
    p.delta0 = delta[e];
    p.gamma_tilde = half_width(delta, r, e);
    p.A = r[e];
    p.B = interpolate(delta, values, p.delta0 + p.gamma_tilde) -
          interpolate(delta, values, p.delta0 - p.gamma_tilde);
  } else {
    // The two extrema sit at x = g tan(phi/2) (value D cos^2(phi/2)) and
    // x = -g cot(phi/2) (value -D sin^2(phi/2)).
    const double s = delta[imax] > delta[imin] ? 1.0 : -1.0;
    const double sin_phi = s * std::sqrt(std::max(0.0, 1.0 - c * c));
    const double phi = std::atan2(sin_phi, c);
    p.gamma_tilde = 0.5 * std::abs(delta[imax] - delta[imin]) * std::abs(sin_phi);
    p.delta0 = delta[imax] - p.gamma_tilde * std::tan(0.5 * phi);
    p.A = D * c;
    p.B = D * sin_phi;
  }
  if (!(p.gamma_tilde > 0.0)) p.gamma_tilde = 0.1 * (delta.back() - delta.front());
  return p;
}

LineshapeParams initial_guess(const Spectrum& spectrum) {
  return initial_guess(spectrum.delta_grid, spectrum.transmission);
}

FitResult fit_lineshape(std::span<const double> delta, std::span<const double> values,
                        const FitOptions& options) {
  check_data(delta, values, 7);
  const std::size_t n = values.size();
  const Scaled sc{0.5 * (delta.front() + delta.back()), 0.5 * (delta.back() - delta.front())};
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = (delta[i] - sc.origin) / sc.scale;

  const LineshapeParams guess = initial_guess(delta, values);
  Vec5 q;
  q << guess.A, guess.B, guess.C, std::log(guess.gamma_tilde / sc.scale),
      (guess.delta0 - sc.origin) / sc.scale;

  auto cost = [&](const Vec5& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = model(p, u[i], nullptr) - values[i];
      s += e * e;
    }
    return s;
  };
  auto normal_equations = [&](const Vec5& p, Mat5& JtJ, Vec5& Jtr) {
    JtJ.setZero();
    Jtr.setZero();
    Vec5 g;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = model(p, u[i], &g) - values[i];
      JtJ.noalias() += g * g.transpose();
      Jtr += g * e;
    }
  };

  FitResult result;
  double lambda = options.initial_damping;
  double current = cost(q);
  Mat5 JtJ;
  Vec5 Jtr;
  normal_equations(q, JtJ, Jtr);
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (Jtr.norm() < options.gradient_tolerance) {
      result.converged = true;
      break;
    }
    bool accepted = false;
    Vec5 step;
    while (lambda < 1e16) {
      Mat5 M = JtJ;
      for (int k = 0; k < 5; ++k) M(k, k) += lambda * std::max(JtJ(k, k), 1e-30);
      step = M.ldlt().solve(-Jtr);
      const Vec5 trial = q + step;
      const double c = cost(trial);
      if (std::isfinite(c) && c <= current) {
        q = trial;
        current = c;
        lambda = std::max(lambda / options.damping_factor, 1e-15);
        accepted = true;
        break;
      }
      lambda *= options.damping_factor;
    }
    if (!accepted) {
      // No descent direction left at any damping: a numerical minimum.
      result.converged = true;
      break;
    }
    normal_equations(q, JtJ, Jtr);
    if (step.norm() < options.step_tolerance * (q.norm() + options.step_tolerance)) {
      result.converged = true;
      ++it;
      break;
    }
  }
  result.iterations = it;

  // Cost comparisons resolve the minimum only to sqrt(epsilon); finish with a
  // few undamped Gauss-Newton steps driven by the gradient itself.
  if (result.converged) {
    for (int k = 0; k < 8; ++k) {
      const Vec5 step = JtJ.ldlt().solve(-Jtr);
      if (!step.allFinite() || step.norm() > 1e-6 * (q.norm() + 1.0)) break;
      q += step;
      normal_equations(q, JtJ, Jtr);
      if (step.norm() <= 1e-15 * (q.norm() + 1.0)) break;
    }
    current = cost(q);
  }

  const double g = sc.scale * std::exp(q(3));
  result.params = {q(0), q(1), q(2), g, sc.origin + sc.scale * q(4)};
  result.polar = to_polar(q(0), q(1), q(2));
  result.residual_rms = std::sqrt(current / n);

  // Covariance in physical parameters from the physical Jacobian.
  Mat5 H = Mat5::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = lineshape_jacobian(result.params, delta[i]);
    const Vec5 v = Eigen::Map<const Vec5>(j.data());
    H.noalias() += v * v.transpose();
  }
  const double sigma2 = current / std::max<double>(1.0, static_cast<double>(n) - 5.0);
  const Mat5 cov = H.completeOrthogonalDecomposition().pseudoInverse() * sigma2;
  for (int k = 0; k < 5; ++k) result.covariance_diagonal[k] = cov(k, k);
  return result;
}

FitResult fit_lineshape(const Spectrum& spectrum, const FitOptions& options) {
  return fit_lineshape(spectrum.delta_grid, spectrum.transmission, options);
}

}  // namespace lspec
