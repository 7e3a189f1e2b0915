#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <algorithm>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "lspec/analytic.hpp"
#include "lspec/csv.hpp"
#include "lspec/doppler.hpp"
#include "lspec/fitting.hpp"
#include "lspec/hanle.hpp"
#include "lspec/scan.hpp"
#include "lspec/units.hpp"

namespace fs = std::filesystem;
using namespace lspec;
using units::from_khz;
using units::from_mhz;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int number;
  const char* title;
  double budget_s;
  std::function<Outcome()> run;
};

Medium rb_medium() {
  return {units::from_per_cm3(2.5e11), units::from_cm(2.5), units::from_nm(795.0), 0.0};
}

Outcome analytic_numeric_equivalence() {
  const double g = from_mhz(3);
  const Rates r{g, 0.0, 1e-5 * g};
  const Medium m = rb_medium();
  double worst = 0.0;
  std::string where;
  for (double big : {0.0, g, 10 * g}) {
    for (double wd : {g / 50, g / 10, g / 2}) {
      const double d0 = ac_stark_shift(big, wd, g);
      const double gt = resonance_width(big, wd, g, r.gamma_bc);
      double peak = 0.0;
      double dev = 0.0;
      for (int i = -100; i <= 100; ++i) {
        const Fields f{wd, wd / 50, big, d0 + gt * i / 10.0};
        const double numeric = susceptibility_numeric(r, f, m).imag();
        const double closed = absorption_profile(r, f, m);
        peak = std::max(peak, std::abs(numeric));
        dev = std::max(dev, std::abs(numeric - closed));
      }
      const double rel = dev / peak;
      if (rel > worst) {
        worst = rel;
        where = fmt::format("Delta = {:g} gamma, Omega_d = gamma/{:g}", big / g, g / wd);
      }
    }
  }
  return {worst < 0.05,
          fmt::format("max peak-normalised deviation {:.3g} (limit 0.05) at {}", worst, where)};
}

Outcome steady_state_physicality() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto logu = [&](double lo, double hi) { return lo * std::pow(hi / lo, u(rng)); };
  const Level levels[3] = {Level::a, Level::b, Level::c};
  double trace = 0.0, herm = 0.0, pop = 0.0, residual = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const Rates r{from_mhz(logu(0.1, 10)), u(rng) < 0.2 ? 0.0 : from_mhz(logu(0.1, 1000)),
                  from_khz(logu(1e-3, 1000))};
    const double wd = u(rng) < 0.05 ? 0.0 : from_mhz(logu(1e-3, 100));
    const double wp = wd > 0.0 ? wd * logu(1e-4, 1.0) : from_mhz(logu(1e-3, 1));
    const Fields f{wd, wp, from_mhz(6000 * (u(rng) - 0.5)), from_khz(2000 * (u(rng) - 0.5))};
    const auto rho = steady_state(r, f);
    trace = std::max(trace, std::abs(rho.trace() - 1.0));
    herm = std::max(herm, rho.hermiticity_error());
    for (auto l : levels) {
      const double p = rho.population(l);
      pop = std::max({pop, -p, p - 1.0});
    }
    const auto d = derivatives(r, PhasedFields(f), rho);
    double dmax = 0.0;
    for (auto i : levels)
      for (auto j : levels) dmax = std::max(dmax, std::abs(d(i, j)));
    residual = std::max(residual, dmax / largest_rate(r, PhasedFields(f)));
  }
  const bool ok = trace <= 1e-12 && herm <= 1e-12 && pop <= 1e-12 && residual < 1e-10;
  return {ok, fmt::format("10000 draws: trace {:.2g}, hermiticity {:.2g}, population excess {:.2g}, "
                          "relative residual {:.2g}",
                          trace, herm, std::max(pop, 0.0), residual)};
}

Outcome fit_round_trip() {
  std::mt19937_64 rng(1234567);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> normal;
  int exact_ok = 0;
  int noisy_ok = 0;
  double worst = 0.0;
  const int draws = 1000;
  const int points = 400;
  for (int k = 0; k < draws; ++k) {
    const double gt = from_khz(0.01 * std::pow(1e4, u(rng)));
    const double D = 0.05 + 0.95 * u(rng);
    const double phi = pi * (2 * u(rng) - 1);
    const LineshapeParams truth{D * std::cos(phi), D * std::sin(phi), 0.2 + 0.8 * u(rng), gt,
                                gt * (6 * u(rng) - 3)};
    std::vector<double> x(points), clean(points), noisy(points);
    for (int i = 0; i < points; ++i) {
      x[i] = truth.delta0 + gt * (-20.0 + 40.0 * i / (points - 1));
      clean[i] = lineshape(truth, x[i]);
      noisy[i] = clean[i] + 0.01 * D * normal(rng);
    }
    const auto fit = fit_lineshape(x, clean);
    const auto& p = fit.params;
    const double err = std::max({std::abs(p.A - truth.A) / D, std::abs(p.B - truth.B) / D,
                                 std::abs(p.C - truth.C) / truth.C,
                                 std::abs(p.gamma_tilde - gt) / gt,
                                 std::abs(p.delta0 - truth.delta0) / gt});
    worst = std::max(worst, err);
    if (err <= 1e-8) ++exact_ok;
    const auto nf = fit_lineshape(x, noisy);
    if (std::abs(nf.params.gamma_tilde - gt) <= 0.02 * gt &&
        std::abs(nf.params.delta0 - truth.delta0) <= 0.02 * gt) {
      ++noisy_ok;
    }
  }
  const bool ok = exact_ok == draws && noisy_ok >= 0.95 * draws;
  return {ok, fmt::format("noiseless {}/{} within 1e-8 (worst {:.2g}); 1% noise {}/{} within 2%",
                          exact_ok, draws, worst, noisy_ok, draws)};
}

struct Sweep {
  std::vector<DescriptorRow> rows;
  double seconds;
};

std::optional<Sweep> torr30_sweep;

Sweep timed_scan(const ScanConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const auto result = run_scan(config, threads_from_environment());
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {result.curve.rows, s};
}

Outcome inversion() {
  torr30_sweep = timed_scan(preset("ne_30torr"));
  const auto& rows = torr30_sweep->rows;
  double phi0 = rows.front().phi;
  double phi_max = -INFINITY;
  for (const auto& r : rows)
    if (std::isfinite(r.phi)) phi_max = std::max(phi_max, r.phi);
  const bool buffer_ok = rows.front().big_delta_mhz == 0.0 && std::abs(phi0) < 0.1 * pi &&
                         phi_max > 0.6 * pi && torr30_sweep->seconds < 120.0;

  const auto vacuum = timed_scan(preset("vacuum"));
  double vac_max = 0.0;
  double vac_at = 0.0;
  for (const auto& r : vacuum.rows) {
    const double a = std::isfinite(r.phi) ? std::abs(r.phi) : INFINITY;
    if (a > vac_max) {
      vac_max = a;
      vac_at = r.big_delta_mhz;
    }
  }
  const bool vacuum_ok = vac_max < 0.2 * pi && vacuum.seconds < 120.0;
  return {buffer_ok && vacuum_ok,
          fmt::format("30 Torr: phi(0) = {:.3f} pi, max phi = {:.3f} pi ({:.0f} s) [{}]; "
                      "vacuum: max |phi| = {:.3f} pi at {:g} MHz ({:.0f} s) [{}]",
                      phi0 / pi, phi_max / pi, torr30_sweep->seconds, buffer_ok ? "ok" : "fail",
                      vac_max / pi, vac_at, vacuum.seconds, vacuum_ok ? "ok" : "fail")};
}

Outcome width_behaviour() {
  const auto config = preset("ne_30torr");
  const double g = from_mhz(config.gamma_r_mhz + config.gamma_deph_mhz);
  const double wd = from_mhz(config.omega_d_mhz);
  const double analytic = resonance_width(0.0, wd, g, from_khz(config.gamma_bc_khz));
  const double expected = wd * wd / g;
  const bool analytic_ok = std::abs(analytic - expected) <= 1e-15 * expected;

  double at0 = NAN;
  double at2 = NAN;
  if (torr30_sweep) {
    for (const auto& r : torr30_sweep->rows) {
      if (r.big_delta_mhz == 0.0) at0 = r.gamma_tilde_khz;
      if (r.big_delta_mhz == 2000.0) at2 = r.gamma_tilde_khz;
    }
  } else {
    auto endpoints = config;
    endpoints.sweep = {0.0, 2000.0, 2};
    const auto sweep = timed_scan(endpoints);
    at0 = sweep.rows[0].gamma_tilde_khz;
    at2 = sweep.rows[1].gamma_tilde_khz;
  }
  const double ratio = at0 / at2;
  return {analytic_ok && ratio > 2.0,
          fmt::format("analytic gamma~(0) / (Omega_d^2/gamma) - 1 = {:.2g}; fitted gamma~(0) = {:.4g} "
                      "kHz, gamma~(2 GHz) = {:.4g} kHz, ratio {:.3g} (limit 2)",
                      analytic / expected - 1.0, at0, at2, ratio)};
}

Outcome stark_curve() {
  const double g = from_mhz(153);
  const double wd = from_mhz(2.5);
  const double peak = wd * wd / (2 * g);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double odd = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double big = 20 * g * u(rng);
    const double v = ac_stark_shift(big, wd, g);
    const double direct = wd * wd * big / (g * g + big * big);
    odd = std::max(odd, std::abs(v + ac_stark_shift(-big, wd, g)) / std::abs(v));
    odd = std::max(odd, std::abs(v - direct) / std::abs(direct));
  }
  const double at_plus = ac_stark_shift(g, wd, g);
  const double at_minus = ac_stark_shift(-g, wd, g);
  double scan_max = 0.0;
  for (int i = 0; i <= 200000; ++i) scan_max = std::max(scan_max, ac_stark_shift(g * i / 1e4, wd, g));
  const double ext = std::max(std::abs(at_plus - peak), std::abs(at_minus + peak)) / peak;
  const bool ok = ac_stark_shift(0.0, wd, g) == 0.0 && odd <= 1e-9 && ext <= 1e-9 &&
                  scan_max <= at_plus * (1 + 1e-9);
  return {ok, fmt::format("delta0(0) = {:g}; odd/direct deviation {:.2g}; extremum deviation {:.2g}",
                          ac_stark_shift(0.0, wd, g), odd, ext)};
}

Outcome doppler_quadrature() {
  const double g = from_mhz(3);
  const double ku = from_mhz(250);
  auto f = [g](double d) { return std::complex<double>{0.0, 1.0} / std::complex<double>{g, d}; };
  QuadratureSpec gh{QuadratureScheme::gauss_hermite, 64};
  QuadratureSpec trap{QuadratureScheme::trapezoid, 100000, 6.0};
  const auto a = apply_rule(make_rule(gh, ku), f, 0.0);
  const auto b = apply_rule(make_rule(trap, ku), f, 0.0);
  const double rel = std::abs(a - b) / std::abs(b);
  return {rel < 1e-6, fmt::format("Gauss-Hermite 64 vs trapezoid 1e5 at line centre: relative error "
                                  "{:.3g} (limit 1e-6)",
                                  rel)};
}

Outcome sign_structure() {
  std::mt19937_64 rng(88);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Medium m = rb_medium();
  double parity = 0.0;
  double root = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const Rates r{from_mhz(3), from_mhz(500 * u(rng)), from_khz(100 * u(rng))};
    const double wd = from_mhz(0.05 + 20 * u(rng));
    const double big = from_mhz(4000 * u(rng));
    const auto p = lineshape_coefficients(r, Fields{wd, 0.0, big, 0.0}, m);
    const auto n = lineshape_coefficients(r, Fields{wd, 0.0, -big, 0.0}, m);
    parity = std::max(parity, std::abs(p.A - n.A) / std::abs(p.A));
    if (p.B != 0.0) parity = std::max(parity, std::abs(p.B + n.B) / std::abs(p.B));

    const double g = from_mhz(3 + 500 * u(rng));
    const double x = 1e-4 * std::pow(100.0, u(rng));  // gamma_bc gamma / Omega_d^2 in (1e-4, 1e-2]
    const Rates rr{g, 0.0, x * wd * wd / g};
    const auto s = sign_change_detuning(rr, Fields{wd, 0.0, 0.0, 0.0});
    root = std::max(root, std::abs(s.numeric - s.approximate) / s.approximate);
  }
  return {parity <= 1e-12 && root <= 0.1,
          fmt::format("parity deviation {:.2g}; worst root offset {:.3g} (limit 0.1)", parity, root)};
}

Outcome hanle_algebra() {
  using namespace lspec::hanle;
  const auto d1 = dark_state(Transition::two_to_one);
  const auto d2 = dark_state(Transition::two_to_two);
  const double ov = std::abs(overlap(d1, d2));
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n;
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto s = ZeemanState{{n(rng), n(rng)}, {n(rng), n(rng)}}.normalized();
    for (auto t : {Transition::two_to_one, Transition::two_to_two}) {
      const double b = brightness(s, t);
      const double d = std::abs(overlap(s, dark_state(t)));
      worst = std::max(worst, std::abs(b * b + d * d - 1.0));
    }
  }
  return {ov <= 1e-16 && worst <= 1e-12,
          fmt::format("dark-state overlap {:.2g}; complementarity deviation {:.2g}", ov, worst)};
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = read_file(e.path());
  }
  return files;
}

Outcome cli_determinism() {
  const fs::path base = fs::temp_directory_path() / "lspec_acceptance_cli";
  fs::remove_all(base);
  fs::create_directories(base);
  const std::string exe = LSPEC_SCAN_EXE;
  const std::string config = LSPEC_FIXTURE_DIR "/determinism.ini";
  auto run = [&](const fs::path& out, int threads) {
    const std::string cmd =
        fmt::format("\"{}\" run \"{}\" -o \"{}\" -j {} > \"{}\" 2>&1", exe, config, out.string(),
                    threads, (base / (out.filename().string() + ".log")).string());
    return std::system(cmd.c_str());
  };
  const int rc1 = run(base / "first", 1);
  const int rc2 = run(base / "second", 2);
  if (rc1 != 0 || rc2 != 0) {
    return {false, fmt::format("scan run exit status {} / {}", rc1, rc2)};
  }
  const auto first = read_tree(base / "first");
  const auto second = read_tree(base / "second");
  const bool identical = first == second && !first.empty();

  std::size_t spectra = 0;
  bool lossless = true;
  for (const auto& [name, text] : first) {
    if (name.rfind("spectra", 0) != 0) continue;
    ++spectra;
    const auto loaded = load_spectrum_csv(base / "first" / name);
    const fs::path copy = base / "reexport.csv";
    export_csv(loaded, copy);
    lossless = lossless && read_file(copy) == text;
  }
  fs::remove_all(base);
  return {identical && lossless && spectra > 0,
          fmt::format("{} files byte-identical across runs: {}; {} spectra re-export identically: {}",
                      first.size(), identical ? "yes" : "no", spectra, lossless ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "analytic-numeric equivalence", 5, analytic_numeric_equivalence},
      {2, "steady-state physicality", 30, steady_state_physicality},
      {3, "fit round trip", 30, fit_round_trip},
      {4, "inversion reproduction", 240, inversion},
      {5, "width behaviour", 120, width_behaviour},
      {6, "delta0 curve", 1, stark_curve},
      {7, "Doppler quadrature", 1, doppler_quadrature},
      {8, "A-coefficient sign structure", 1, sign_structure},
      {9, "Hanle algebra", 1, hanle_algebra},
      {10, "CLI round-trip determinism", 60, cli_determinism},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.number) == selected.end()) {
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && s < c.budget_s;
    if (!pass) ++failures;
    fmt::print("criterion {}: {} - {}: {} [{:.2f} s, budget {:g} s]\n", c.number,
               pass ? "PASS" : "FAIL", c.title, o.detail, s, c.budget_s);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
