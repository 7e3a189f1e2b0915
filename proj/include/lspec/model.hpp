#pragma once

#include <complex>

#include <Eigen/Core>

#include "lspec/errors.hpp"

namespace lspec {

using cplx = std::complex<double>;

/// Relaxation rates of the closed three-level Lambda system (rad/s).
///
/// The total optical polarization decay is never stored; gamma() always
/// returns gamma_r + gamma_deph.
struct Rates {
  double gamma_r = 0.0;     ///< radiative decay of |a>, repopulating each ground level
  double gamma_deph = 0.0;  ///< collisional optical dephasing
  double gamma_bc = 0.0;    ///< ground-state coherence decay / population exchange

  double gamma() const { return gamma_r + gamma_deph; }
  void validate() const;
};

/// Rabi magnitudes and detunings (rad/s). Probe couples a-b, drive couples a-c.
struct Fields {
  double omega_d = 0.0;
  double omega_p = 0.0;
  double big_delta = 0.0;    ///< one-photon detuning
  double small_delta = 0.0;  ///< two-photon detuning

  void validate() const;
};

/// Fields with complex Rabi frequencies; only the moduli are physical.
struct PhasedFields {
  cplx omega_d;
  cplx omega_p;
  double big_delta = 0.0;
  double small_delta = 0.0;

  PhasedFields() = default;
  PhasedFields(cplx od, cplx op, double big, double small)
      : omega_d(od), omega_p(op), big_delta(big), small_delta(small) {}
  explicit PhasedFields(const Fields& f)
      : omega_d(f.omega_d), omega_p(f.omega_p),
        big_delta(f.big_delta), small_delta(f.small_delta) {}
};

/// Vapour cell, SI units (m^-3, m, m, rad/s).
struct Medium {
  double density = 0.0;
  double length = 0.0;
  double wavelength = 0.0;
  double ku = 0.0;  ///< Doppler width k*u

  void validate() const;
};

/// kappa = (3 / 8 pi) N lambda^2 gamma_r, in rad s^-1 m^-1.
double kappa(const Medium& medium, const Rates& rates);

enum class Level : int { a = 0, b = 1, c = 2 };

/// 3x3 density matrix in the (a, b, c) basis.
class DensityMatrix3 {
 public:
  DensityMatrix3() : m_(Eigen::Matrix3cd::Zero()) {}
  explicit DensityMatrix3(const Eigen::Matrix3cd& m) : m_(m) {}

  cplx operator()(Level i, Level j) const {
    return m_(static_cast<int>(i), static_cast<int>(j));
  }
  cplx& operator()(Level i, Level j) {
    return m_(static_cast<int>(i), static_cast<int>(j));
  }

  double population(Level i) const { return (*this)(i, i).real(); }
  cplx trace() const { return m_.trace(); }
  /// max |rho_ij - conj(rho_ji)|
  double hermiticity_error() const;

  const Eigen::Matrix3cd& matrix() const { return m_; }

 private:
  Eigen::Matrix3cd m_;
};

struct GeneralizedRates {
  cplx gamma_ab;  ///< gamma + i(Delta + delta)
  cplx gamma_ca;  ///< gamma + i Delta
  cplx gamma_cb;  ///< gamma_bc + i delta
};

GeneralizedRates generalized_rates(const Rates& rates, double big_delta, double small_delta);

/// Whether the ground-state coherence rho_cb is part of the solution.
/// `destroyed` pins rho_cb = rho_bc = 0 (the gamma_bc -> infinity limit of the
/// coherence while keeping population exchange at gamma_bc); used to compute
/// the incoherent reference transmission.
enum class GroundCoherence { kept, destroyed };

/// Steady state of the density-matrix equations for the closed Lambda system,
/// from a direct dense solve of the 9x9 Liouvillian with the rho_aa row
/// replaced by the trace constraint.
///
/// Throws SingularSystem when the system is rank-deficient (relative singular
/// value below 1e-12), e.g. gamma_r = gamma_bc = 0 without fields.
DensityMatrix3 steady_state(const Rates& rates, const Fields& fields);
DensityMatrix3 steady_state(const Rates& rates, const PhasedFields& fields,
                            GroundCoherence coherence = GroundCoherence::kept);

/// Right-hand sides of the equations of motion evaluated at `rho`, including
/// the conjugate equations and rho_aa from closure.
DensityMatrix3 derivatives(const Rates& rates, const PhasedFields& fields,
                           const DensityMatrix3& rho);

/// Largest rate appearing in the equations; the natural scale for residuals.
double largest_rate(const Rates& rates, const PhasedFields& fields);

/// chi = kappa * rho_ab / Omega_p from the exact steady state (per metre).
/// Requires omega_p > 0.
cplx susceptibility_numeric(const Rates& rates, const Fields& fields, const Medium& medium);
cplx susceptibility_numeric(const Rates& rates, const PhasedFields& fields, const Medium& medium);

/// Weak-probe closed form with strong-drive population differences.
cplx susceptibility_analytic(const Rates& rates, const Fields& fields, const Medium& medium);

struct PopulationDifferences {
  double aa_minus_bb;
  double aa_minus_cc;
};

/// Strong-drive population differences. Throws DegenerateRates when
/// 2 gamma_bc Delta^2 + gamma |Omega_d|^2 == 0.
PopulationDifferences population_differences(const Rates& rates, const Fields& fields);

}  // namespace lspec
