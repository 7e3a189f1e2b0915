#include "lspec/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lspec {

void SlabConfig::validate() const {
  if (slab_count < 16) throw InvalidArgument("slab_count must be >= 16");
}

void Spectrum::validate() const {
  if (delta_grid.empty()) throw InvalidArgument("spectrum is empty");
  if (delta_grid.size() != transmission.size()) {
    throw InvalidArgument("delta_grid and transmission differ in length");
  }
  for (std::size_t i = 1; i < delta_grid.size(); ++i) {
    if (!(delta_grid[i] > delta_grid[i - 1])) {
      throw InvalidArgument("delta_grid must be strictly increasing");
    }
  }
  for (double t : transmission) {
    if (!std::isfinite(t) || t < 0.0) throw InvalidArgument("transmission must be finite and >= 0");
  }
}

std::vector<double> uniform_grid(double center, double span, int points) {
  if (points < 2) throw InvalidArgument("grid needs at least 2 points");
  if (!(span > 0.0)) throw InvalidArgument("grid span must be > 0");
  std::vector<double> grid(points);
  const double lo = center - 0.5 * span;
  const double step = span / (points - 1);
  for (int i = 0; i < points; ++i) grid[i] = lo + step * i;
  return grid;
}

namespace {

void check_inputs(const SimulationParams& p, const std::vector<double>& grid) {
  p.rates.validate();
  p.fields.validate();
  p.medium.validate();
  p.quad.validate();
  p.slabs.validate();
  if (!(p.medium.length > 0.0)) throw InvalidArgument("medium length must be > 0");
  if (!(p.fields.omega_p > 0.0)) throw InvalidArgument("transmit requires omega_p > 0");
  if (p.fields.omega_p > p.fields.omega_d) {
    throw InvalidArgument("transmit requires omega_p <= omega_d (weak probe)");
  }
  if (grid.empty()) throw InvalidArgument("delta grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw InvalidArgument("delta grid must be strictly increasing");
  }
}

// rho_ab / Omega_p for one velocity class.
cplx probe_response(const Rates& rates, double omega_d, double omega_p, double big_delta,
                    double small_delta, GroundCoherence coherence) {
  const PhasedFields f(cplx(omega_d), cplx(omega_p), big_delta, small_delta);
  return steady_state(rates, f, coherence)(Level::a, Level::b) / omega_p;
}

// Two-level drive absorption per unit kappa, averaged over the rule.
double drive_absorption(const Rates& rates, double omega_d, double big_delta,
                        const QuadratureRule& rule) {
  if (!(omega_d > 0.0)) return 0.0;
  const double g = rates.gamma();
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double d = big_delta - rule.kv[i];
    const auto pd = population_differences(rates, Fields{omega_d, 0.0, d, 0.0});
    acc += rule.weight[i] * g / (g * g + d * d) * (-pd.aa_minus_cc);
  }
  return acc;
}

// Drive Rabi frequency at the 2n+1 points z = j h / 2.
std::vector<double> drive_profile(const SimulationParams& p, int slabs, const QuadratureRule& rule) {
  const double k = kappa(p.medium, p.rates);
  const double omega0 = p.fields.omega_d;
  std::vector<double> omega(2 * slabs + 1, omega0);
  if (!p.slabs.drive_attenuation || k == 0.0 || omega0 == 0.0) return omega;

  const double h = 0.5 * p.medium.length / slabs;
  auto rate = [&](double log_intensity) {
    return -k * drive_absorption(p.rates, omega0 * std::exp(0.5 * log_intensity),
                                 p.fields.big_delta, rule);
  };
  double y = 0.0;
  for (int j = 0; j < 2 * slabs; ++j) {
    const double k1 = rate(y);
    const double k2 = rate(y + 0.5 * h * k1);
    const double k3 = rate(y + 0.5 * h * k2);
    const double k4 = rate(y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    omega[j + 1] = omega0 * std::exp(0.5 * y);
  }
  return omega;
}

std::vector<double> propagate(const SimulationParams& p, const std::vector<double>& grid,
                              int slabs, GroundCoherence coherence, const QuadratureRule& rule,
                              bool& gain) {
  const double k = kappa(p.medium, p.rates);
  std::vector<double> out(grid.size(), 1.0);
  if (k == 0.0) return out;

  const auto drive = drive_profile(p, slabs, rule);
  const double h = p.medium.length / slabs;
  const double gain_floor = -1e-6 / p.rates.gamma();
  const double omega_p0 = p.fields.omega_p;

  for (std::size_t n = 0; n < grid.size(); ++n) {
    const double delta = grid[n];
    // alpha_p / kappa at given local Rabi frequencies
    auto alpha = [&](double omega_d, double omega_p) {
      cplx acc = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i) {
        acc += rule.weight[i] * probe_response(p.rates, omega_d, omega_p,
                                               p.fields.big_delta - rule.kv[i], delta, coherence);
      }
      return acc.imag();
    };
    double log_ip = 0.0;
    double a_prev = alpha(drive[0], omega_p0);
    for (int s = 0; s < slabs; ++s) {
      const double log_mid = log_ip - 0.5 * h * k * a_prev;
      const double a = alpha(drive[2 * s + 1], omega_p0 * std::exp(0.5 * log_mid));
      if (a < gain_floor) gain = true;
      log_ip -= h * k * a;
      a_prev = a;
    }
    out[n] = std::exp(log_ip);
  }
  return out;
}

Spectrum run(const SimulationParams& p, const std::vector<double>& grid,
             GroundCoherence coherence, bool allow_richardson) {
  check_inputs(p, grid);
  const auto rule = velocity_rule(p.rates, p.fields, p.medium, p.quad, grid);
  Spectrum s;
  s.delta_grid = grid;
  s.metadata = p;
  s.transmission = propagate(p, grid, p.slabs.slab_count, coherence, rule, s.gain_flag);
  if (allow_richardson && p.slabs.richardson_check) {
    bool unused = false;
    const auto fine = propagate(p, grid, 2 * p.slabs.slab_count, coherence, rule, unused);
    double change = 0.0;
    for (std::size_t i = 0; i < fine.size(); ++i) {
      change = std::max(change, std::abs(fine[i] - s.transmission[i]));
    }
    s.richardson_change = change;
  }
  return s;
}

}  // namespace

QuadratureRule velocity_rule(const Rates& rates, const Fields& entry, const Medium& medium,
                             const QuadratureSpec& quad, const std::vector<double>& delta_grid) {
  if (medium.ku == 0.0) return QuadratureRule{{0.0}, {1.0}, {}};
  if (quad.scheme != QuadratureScheme::adaptive) return make_rule(quad, medium.ku);

  const double centre = delta_grid.empty() ? 0.0 : delta_grid[delta_grid.size() / 2];
  auto f = [&](double d) {
    return probe_response(rates, entry.omega_d, entry.omega_p, d, centre, GroundCoherence::kept);
  };
  auto rule = adapt_rule(f, entry.big_delta, medium.ku, quad);
  const cplx coarse = apply_rule(rule, f, entry.big_delta);
  const cplx fine = apply_rule(refine_rule(rule, quad, medium.ku), f, entry.big_delta);
  if (std::abs(fine - coarse) > 1e-4 * std::max(std::abs(fine), 1e-300)) {
    throw QuadratureDivergence("velocity rule changes by more than 1e-4 under refinement");
  }
  return rule;
}

Spectrum transmit(const Rates& rates, const Fields& entry, const Medium& medium,
                  const QuadratureSpec& quad, const SlabConfig& slabs,
                  const std::vector<double>& delta_grid) {
  return transmit(SimulationParams{rates, entry, medium, quad, slabs}, delta_grid);
}

Spectrum transmit(const SimulationParams& params, const std::vector<double>& delta_grid) {
  return run(params, delta_grid, GroundCoherence::kept, true);
}

Spectrum reference_transmission(const SimulationParams& params,
                                const std::vector<double>& delta_grid) {
  return run(params, delta_grid, GroundCoherence::destroyed, false);
}

Spectrum normalize(const Spectrum& spectrum) {
  if (spectrum.delta_grid.empty()) throw InvalidArgument("spectrum is empty");
  if (!spectrum.metadata) {
    throw InvalidArgument("normalize needs the simulation parameters of the spectrum");
  }
  const auto ref = reference_transmission(*spectrum.metadata, spectrum.delta_grid);
  Spectrum out = spectrum;
  for (std::size_t i = 0; i < out.transmission.size(); ++i) {
    const double r = ref.transmission[i];
    if (!(r > std::numeric_limits<double>::min())) {
      throw ZeroBackground("reference transmission underflows; the cell is opaque");
    }
    out.transmission[i] /= r;
  }
  out.normalized = true;
  return out;
}

}  // namespace lspec
