#pragma once

#include <optional>
#include <vector>

#include "lspec/doppler.hpp"
#include "lspec/model.hpp"

namespace lspec {

struct SlabConfig {
  int slab_count = 128;
  bool richardson_check = true;
  bool drive_attenuation = true;

  void validate() const;
};

/// Everything needed to recompute a simulated spectrum.
struct SimulationParams {
  Rates rates;
  Fields fields;  ///< at the cell entrance; small_delta is ignored
  Medium medium;
  QuadratureSpec quad;
  SlabConfig slabs;
};

struct Spectrum {
  std::vector<double> delta_grid;  ///< two-photon detuning, rad/s, strictly increasing
  std::vector<double> transmission;
  std::optional<SimulationParams> metadata;
  bool normalized = false;
  bool gain_flag = false;  ///< some slab had alpha_p < -1e-6 kappa/gamma
  /// max |T(2n slabs) - T(n slabs)| when the slab check ran, else negative
  double richardson_change = -1.0;

  void validate() const;
};

/// Velocity rule used for one transmit call: a single node at kv = 0 when
/// ku = 0, otherwise a fixed or adaptive rule built for the probe response at
/// the cell entrance and the centre of `delta_grid`.
QuadratureRule velocity_rule(const Rates& rates, const Fields& entry, const Medium& medium,
                             const QuadratureSpec& quad, const std::vector<double>& delta_grid);

/// Probe transmission I_p(L)/I_p(0) on `delta_grid` through a cell of
/// `slabs.slab_count` slabs. Probe and drive intensities are updated with
/// exponential slab steps; local Rabi frequencies follow the square root of
/// the intensities. Requires medium.length > 0 and 0 < omega_p <= omega_d.
Spectrum transmit(const Rates& rates, const Fields& entry, const Medium& medium,
                  const QuadratureSpec& quad, const SlabConfig& slabs,
                  const std::vector<double>& delta_grid);
Spectrum transmit(const SimulationParams& params, const std::vector<double>& delta_grid);

/// Same propagation with the ground-state coherence removed: the incoherent
/// background against which spectra are normalized.
Spectrum reference_transmission(const SimulationParams& params,
                                 const std::vector<double>& delta_grid);

/// Divides by reference_transmission() on the same grid. Requires metadata.
/// Throws ZeroBackground when the reference underflows.
Spectrum normalize(const Spectrum& spectrum);

/// Uniform grid of `points` values on [center - span/2, center + span/2].
std::vector<double> uniform_grid(double center, double span, int points);

}  // namespace lspec
