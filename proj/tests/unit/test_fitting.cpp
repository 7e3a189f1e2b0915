#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lspec/csv.hpp"
#include "lspec/fitting.hpp"
#include "lspec/units.hpp"
#include "oracle_values.hpp"

using namespace lspec;

namespace {

constexpr double pi = std::numbers::pi;

struct Data {
  std::vector<double> x;
  std::vector<double> y;
};

Data synthesize(const LineshapeParams& p, double half_span, int n, double sigma = 0.0,
                unsigned seed = 1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  Data d;
  for (int i = 0; i < n; ++i) {
    const double x = p.delta0 - half_span + 2.0 * half_span * i / (n - 1);
    d.x.push_back(x);
    d.y.push_back(lineshape(p, x) + (sigma > 0.0 ? noise(rng) : 0.0));
  }
  return d;
}

void check_close(const LineshapeParams& fit, const LineshapeParams& truth, double tol) {
  const double d = std::hypot(truth.A, truth.B);
  CHECK(std::abs(fit.A - truth.A) <= tol * d);
  CHECK(std::abs(fit.B - truth.B) <= tol * d);
  CHECK(std::abs(fit.C - truth.C) <= tol * std::abs(truth.C));
  CHECK(std::abs(fit.gamma_tilde - truth.gamma_tilde) <= tol * truth.gamma_tilde);
  CHECK(std::abs(fit.delta0 - truth.delta0) <= tol * truth.gamma_tilde);
}

}  // namespace

TEST_CASE("noiseless symmetric peak") {
  const LineshapeParams truth{1.0, 0.0, 0.5, units::from_khz(3), units::from_khz(1.2)};
  const auto d = synthesize(truth, 20 * truth.gamma_tilde, 201);
  const auto fit = fit_lineshape(d.x, d.y);
  CHECK(fit.converged);
  check_close(fit.params, truth, 1e-8);
  CHECK(std::abs(fit.polar.phi) < 1e-8);
  CHECK(fit.residual_rms < 1e-10);
}

TEST_CASE("pure dispersion and enhanced absorption angles") {
  LineshapeParams truth{0.0, 1.0, 0.5, units::from_khz(3), 0.0};
  auto d = synthesize(truth, 20 * truth.gamma_tilde, 201);
  auto fit = fit_lineshape(d.x, d.y);
  CHECK(fit.polar.phi == doctest::Approx(pi / 2).epsilon(1e-8));

  truth = {-1.0, 0.0, 0.9, units::from_khz(3), units::from_khz(-2)};
  d = synthesize(truth, 20 * truth.gamma_tilde, 201);
  fit = fit_lineshape(d.x, d.y);
  CHECK(std::abs(std::abs(fit.polar.phi) - pi) < 1e-8);
}

TEST_CASE("noisy fixture agrees with the grid-search oracle") {
  const auto s = load_spectrum_csv(LSPEC_FIXTURE_DIR "/noisy_lineshape.csv");
  REQUIRE(s.delta_grid.size() == 400);
  const auto fit = fit_lineshape(s);
  CHECK(fit.converged);
  const LineshapeParams oracle_fit{oracle::noisy_fit[0], oracle::noisy_fit[1], oracle::noisy_fit[2],
                                   units::from_khz(oracle::noisy_fit[3]),
                                   units::from_khz(oracle::noisy_fit[4])};
  check_close(fit.params, oracle_fit, 1e-6);
  const LineshapeParams truth{0.6, -0.35, 0.7, units::from_khz(12), units::from_khz(3)};
  check_close(fit.params, truth, 0.02);
  for (double v : fit.covariance_diagonal) CHECK(v > 0.0);
}

TEST_CASE("dispersion-shaped measured fixture") {
  const auto s = load_spectrum_csv(LSPEC_FIXTURE_DIR "/measured_dispersion.csv");
  const auto fit = fit_lineshape(s);
  CHECK(fit.converged);
  CHECK(fit.polar.phi == doctest::Approx(pi / 2).epsilon(0.05 / (pi / 2)));
}

TEST_CASE("round trip over four decades of width") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int failures = 0;
  for (int k = 0; k < 100; ++k) {
    const double gt = units::from_khz(0.01 * std::pow(1e4, u(rng)));
    const double phi = pi * (2 * u(rng) - 1);
    const double D = 0.05 + u(rng);
    const LineshapeParams truth{D * std::cos(phi), D * std::sin(phi), 0.2 + 0.8 * u(rng), gt,
                                gt * (6 * u(rng) - 3)};
    const auto d = synthesize(truth, 20 * gt, 400);
    const auto fit = fit_lineshape(d.x, d.y);
    const double scale = std::hypot(truth.A, truth.B);
    const bool ok = std::abs(fit.params.A - truth.A) <= 1e-8 * scale &&
                    std::abs(fit.params.B - truth.B) <= 1e-8 * scale &&
                    std::abs(fit.params.C - truth.C) <= 1e-8 * truth.C &&
                    std::abs(fit.params.gamma_tilde - gt) <= 1e-8 * gt &&
                    std::abs(fit.params.delta0 - truth.delta0) <= 1e-8 * gt;
    if (!ok) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("shifting the detuning origin shifts only delta0") {
  const LineshapeParams truth{0.3, 0.5, 0.8, units::from_khz(5), units::from_khz(2)};
  const auto d = synthesize(truth, 25 * truth.gamma_tilde, 300, 0.01, 4);
  const auto base = fit_lineshape(d.x, d.y);
  const double s = units::from_khz(37);
  std::vector<double> shifted = d.x;
  for (double& x : shifted) x += s;
  const auto moved = fit_lineshape(shifted, d.y);
  CHECK(std::abs(moved.params.delta0 - (base.params.delta0 + s)) <= 1e-10 * base.params.gamma_tilde);
  CHECK(moved.params.A == doctest::Approx(base.params.A).epsilon(1e-10));
  CHECK(moved.params.B == doctest::Approx(base.params.B).epsilon(1e-10));
  CHECK(moved.params.C == doctest::Approx(base.params.C).epsilon(1e-10));
  CHECK(moved.params.gamma_tilde == doctest::Approx(base.params.gamma_tilde).epsilon(1e-10));
}

TEST_CASE("scaling the values scales the amplitudes") {
  const LineshapeParams truth{-0.4, 0.2, 0.9, units::from_khz(5), 0.0};
  const auto d = synthesize(truth, 25 * truth.gamma_tilde, 300, 0.01, 5);
  const auto base = fit_lineshape(d.x, d.y);
  const double k = 3.7;
  std::vector<double> scaled = d.y;
  for (double& y : scaled) y *= k;
  const auto fit = fit_lineshape(d.x, scaled);
  CHECK(fit.params.A == doctest::Approx(k * base.params.A).epsilon(1e-10));
  CHECK(fit.params.B == doctest::Approx(k * base.params.B).epsilon(1e-10));
  CHECK(fit.params.C == doctest::Approx(k * base.params.C).epsilon(1e-10));
  CHECK(fit.params.gamma_tilde == doctest::Approx(base.params.gamma_tilde).epsilon(1e-10));
  CHECK(std::abs(fit.params.delta0 - base.params.delta0) <= 1e-10 * base.params.gamma_tilde);
  CHECK(fit.polar.phi == doctest::Approx(base.polar.phi).epsilon(1e-10));
}

TEST_CASE("analytic Jacobian matches central differences") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const LineshapeParams p{u(rng), u(rng), 1.0 + 0.5 * u(rng), 1.5 + u(rng), 0.5 * u(rng)};
    const double x = 4.0 * u(rng);
    const auto J = lineshape_jacobian(p, x);
    for (int j = 0; j < 5; ++j) {
      auto shifted = [&](double h) {
        LineshapeParams q = p;
        double* fields[5] = {&q.A, &q.B, &q.C, &q.gamma_tilde, &q.delta0};
        *fields[j] += h;
        return lineshape(q, x);
      };
      const double h = 1e-6;
      const double fd = (shifted(h) - shifted(-h)) / (2 * h);
      CHECK(std::abs(fd - J[j]) <= 1e-6 * std::max(1.0, std::abs(J[j])));
    }
  }
}

TEST_CASE("initial guess for pure shapes") {
  const double g = units::from_khz(4);
  const double centre = units::from_khz(7);
  auto d = synthesize({0.8, 0.0, 0.5, g, centre}, 30 * g, 301);
  auto guess = initial_guess(d.x, d.y);
  CHECK(std::abs(guess.B) < 0.05 * 0.8);
  CHECK(std::abs(guess.delta0 - centre) <= 0.2 * g);

  d = synthesize({0.0, 0.8, 0.5, g, centre}, 30 * g, 301);
  guess = initial_guess(d.x, d.y);
  CHECK(std::abs(guess.A) < 0.05 * 0.8);
}

TEST_CASE("fit input validation") {
  const std::vector<double> x{1, 2, 3, 4, 5, 6};
  const std::vector<double> y{1, 2, 1, 2, 1, 2};
  CHECK_THROWS_AS(fit_lineshape(x, y), InvalidArgument);
  const std::vector<double> flat_x{1, 2, 3, 4, 5, 6, 7, 8};
  const std::vector<double> flat(8, 0.97);
  CHECK_THROWS_AS(fit_lineshape(flat_x, flat), DegenerateSpectrum);
  CHECK_THROWS_AS(initial_guess(flat_x, flat), DegenerateSpectrum);
}
