#include "lspec/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace lspec {

namespace {

constexpr cplx I{0.0, 1.0};

// Flattened row-major index of rho_ij.
constexpr int idx(Level i, Level j) { return 3 * static_cast<int>(i) + static_cast<int>(j); }

constexpr int aa = idx(Level::a, Level::a);
constexpr int ab = idx(Level::a, Level::b);
constexpr int ac = idx(Level::a, Level::c);
constexpr int ba = idx(Level::b, Level::a);
constexpr int bb = idx(Level::b, Level::b);
constexpr int bc = idx(Level::b, Level::c);
constexpr int ca = idx(Level::c, Level::a);
constexpr int cb = idx(Level::c, Level::b);
constexpr int cc = idx(Level::c, Level::c);

constexpr double kPivotAlarm = 1e-10;
constexpr double kRankTolerance = 1e-12;

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(std::string(name) + " must be finite and >= 0");
  }
}

}  // namespace

void Rates::validate() const {
  require_nonnegative(gamma_r, "gamma_r");
  require_nonnegative(gamma_deph, "gamma_deph");
  require_nonnegative(gamma_bc, "gamma_bc");
}

void Fields::validate() const {
  require_nonnegative(omega_d, "omega_d");
  require_nonnegative(omega_p, "omega_p");
  if (!std::isfinite(big_delta) || !std::isfinite(small_delta)) {
    throw InvalidArgument("detunings must be finite");
  }
}

void Medium::validate() const {
  require_nonnegative(density, "density");
  require_nonnegative(length, "length");
  require_nonnegative(wavelength, "wavelength");
  require_nonnegative(ku, "ku");
}

double kappa(const Medium& medium, const Rates& rates) {
  return 3.0 / (8.0 * std::numbers::pi) * medium.density * medium.wavelength *
         medium.wavelength * rates.gamma_r;
}

double DensityMatrix3::hermiticity_error() const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

GeneralizedRates generalized_rates(const Rates& rates, double big_delta, double small_delta) {
  const double g = rates.gamma();
  return {cplx{g, big_delta + small_delta}, cplx{g, big_delta},
          cplx{rates.gamma_bc, small_delta}};
}

double largest_rate(const Rates& rates, const PhasedFields& f) {
  return std::max({rates.gamma(), rates.gamma_r, rates.gamma_bc, std::abs(f.big_delta),
                   std::abs(f.small_delta), std::abs(f.big_delta + f.small_delta),
                   std::abs(f.omega_d), std::abs(f.omega_p)});
}

DensityMatrix3 steady_state(const Rates& rates, const Fields& fields) {
  rates.validate();
  fields.validate();
  return steady_state(rates, PhasedFields(fields));
}

DensityMatrix3 steady_state(const Rates& rates, const PhasedFields& f,
                            GroundCoherence coherence) {
  using Mat9 = Eigen::Matrix<cplx, 9, 9>;
  using Vec9 = Eigen::Matrix<cplx, 9, 1>;

  const double scale = largest_rate(rates, f);
  if (!(scale > 0.0)) {
    throw SingularSystem("all rates and fields are zero; steady state is not unique");
  }
  const double s = 1.0 / scale;
  const auto G = generalized_rates(rates, f.big_delta, f.small_delta);
  const cplx gab = G.gamma_ab * s, gca = G.gamma_ca * s, gcb = G.gamma_cb * s;
  const cplx wd = f.omega_d * s, wp = f.omega_p * s;
  const cplx wdc = std::conj(wd), wpc = std::conj(wp);
  const double gr = rates.gamma_r * s, gbc = rates.gamma_bc * s;

  Mat9 L = Mat9::Zero();
  Vec9 rhs = Vec9::Zero();

  // Trace constraint in place of the (dependent) rho_aa equation.
  L(aa, aa) = L(aa, bb) = L(aa, cc) = 1.0;
  rhs(aa) = 1.0;

  L(bb, ab) = I * wpc;
  L(bb, ba) = -I * wp;
  L(bb, aa) = gr;
  L(bb, bb) = -gbc;
  L(bb, cc) = gbc;

  L(cc, ac) = I * wdc;
  L(cc, ca) = -I * wd;
  L(cc, aa) = gr;
  L(cc, cc) = -gbc;
  L(cc, bb) = gbc;

  L(ab, ab) = -gab;
  L(ab, bb) = I * wp;
  L(ab, aa) = -I * wp;
  L(ab, cb) = I * wd;

  L(ba, ba) = -std::conj(gab);
  L(ba, bb) = -I * wpc;
  L(ba, aa) = I * wpc;
  L(ba, bc) = -I * wdc;

  L(ca, ca) = -gca;
  L(ca, aa) = I * wdc;
  L(ca, cc) = -I * wdc;
  L(ca, cb) = -I * wpc;

  L(ac, ac) = -std::conj(gca);
  L(ac, aa) = -I * wd;
  L(ac, cc) = I * wd;
  L(ac, bc) = I * wp;

  if (coherence == GroundCoherence::kept) {
    L(cb, cb) = -gcb;
    L(cb, ca) = -I * wp;
    L(cb, ab) = I * wdc;

    L(bc, bc) = -std::conj(gcb);
    L(bc, ac) = I * wpc;
    L(bc, ba) = -I * wd;
  } else {
    L(cb, cb) = 1.0;
    L(bc, bc) = 1.0;
  }

  Eigen::PartialPivLU<Mat9> lu(L);
  const auto diag = lu.matrixLU().diagonal().cwiseAbs();
  if (diag.minCoeff() < kPivotAlarm * diag.maxCoeff()) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd{Eigen::MatrixXcd(L)};
    const auto& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > kRankTolerance * sv(0))) {
      throw SingularSystem("Liouvillian with trace constraint is rank-deficient");
    }
  }
  const Vec9 x = lu.solve(rhs);

  Eigen::Matrix3cd m;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m(i, j) = x(3 * i + j);
  }
  // The exact solution is Hermitian with unit trace; remove round-off.
  m = 0.5 * (m + m.adjoint()).eval();
  m /= m.trace().real();
  return DensityMatrix3(m);
}

DensityMatrix3 derivatives(const Rates& rates, const PhasedFields& f, const DensityMatrix3& rho) {
  const auto G = generalized_rates(rates, f.big_delta, f.small_delta);
  const cplx wd = f.omega_d, wp = f.omega_p;
  const double gr = rates.gamma_r, gbc = rates.gamma_bc;
  auto r = [&](Level i, Level j) { return rho(i, j); };
  using enum Level;

  DensityMatrix3 d;
  d(b, b) = I * std::conj(wp) * r(a, b) - I * wp * r(b, a) + gr * r(a, a) - gbc * r(b, b) +
            gbc * r(c, c);
  d(c, c) = I * std::conj(wd) * r(a, c) - I * wd * r(c, a) + gr * r(a, a) - gbc * r(c, c) +
            gbc * r(b, b);
  d(a, a) = -(d(b, b) + d(c, c));
  d(a, b) = -G.gamma_ab * r(a, b) + I * wp * (r(b, b) - r(a, a)) + I * wd * r(c, b);
  d(c, a) = -G.gamma_ca * r(c, a) + I * std::conj(wd) * (r(a, a) - r(c, c)) -
            I * std::conj(wp) * r(c, b);
  d(c, b) = -G.gamma_cb * r(c, b) - I * wp * r(c, a) + I * std::conj(wd) * r(a, b);
  // Conjugate equations, written for the transposed elements.
  d(b, a) = -std::conj(G.gamma_ab) * r(b, a) - I * std::conj(wp) * (r(b, b) - r(a, a)) -
            I * std::conj(wd) * r(b, c);
  d(a, c) = -std::conj(G.gamma_ca) * r(a, c) - I * wd * (r(a, a) - r(c, c)) + I * wp * r(b, c);
  d(b, c) = -std::conj(G.gamma_cb) * r(b, c) + I * std::conj(wp) * r(a, c) - I * wd * r(b, a);
  return d;
}

cplx susceptibility_numeric(const Rates& rates, const Fields& fields, const Medium& medium) {
  rates.validate();
  fields.validate();
  return susceptibility_numeric(rates, PhasedFields(fields), medium);
}

cplx susceptibility_numeric(const Rates& rates, const PhasedFields& fields, const Medium& medium) {
  if (!(std::abs(fields.omega_p) > 0.0)) {
    throw InvalidArgument("susceptibility_numeric requires omega_p > 0");
  }
  const auto rho = steady_state(rates, fields);
  return kappa(medium, rates) * rho(Level::a, Level::b) / fields.omega_p;
}

PopulationDifferences population_differences(const Rates& rates, const Fields& fields) {
  const double g = rates.gamma();
  const double w2 = fields.omega_d * fields.omega_d;
  const double d2 = fields.big_delta * fields.big_delta;
  const double den = 2.0 * rates.gamma_bc * d2 + g * w2;
  if (den == 0.0) {
    throw DegenerateRates("2*gamma_bc*Delta^2 + gamma*|Omega_d|^2 vanishes");
  }
  return {-(rates.gamma_bc * d2 + g * w2) / den, -rates.gamma_bc * (d2 + g * g) / den};
}

cplx susceptibility_analytic(const Rates& rates, const Fields& fields, const Medium& medium) {
  const auto G = generalized_rates(rates, fields.big_delta, fields.small_delta);
  const auto pd = population_differences(rates, fields);
  const double w2 = fields.omega_d * fields.omega_d;
  const cplx num = G.gamma_cb * (-pd.aa_minus_bb) + w2 / G.gamma_ca * pd.aa_minus_cc;
  const cplx den = G.gamma_ab * G.gamma_cb + w2;
  return I * kappa(medium, rates) * num / den;
}

}  // namespace lspec
