#include <functional>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "lspec/csv.hpp"
#include "lspec/hanle.hpp"
#include "lspec/scan.hpp"

namespace py = pybind11;
using namespace lspec;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Three-level Lambda-system EIT spectra in warm vapour";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<SingularSystem>(m, "SingularSystem", error);
  py::register_exception<DegenerateRates>(m, "DegenerateRates", error);
  py::register_exception<NoSignChange>(m, "NoSignChange", error);
  py::register_exception<QuadratureDivergence>(m, "QuadratureDivergence", error);
  py::register_exception<ZeroBackground>(m, "ZeroBackground", error);
  py::register_exception<DegenerateSpectrum>(m, "DegenerateSpectrum", error);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", error);
  py::register_exception<ParseError>(m, "ParseError", error);
  py::register_exception<SchemaMismatch>(m, "SchemaMismatch", error);
  py::register_exception<ConfigError>(m, "ConfigError", error);
  py::register_exception<IoError>(m, "IoError", error);

  py::class_<Rates>(m, "Rates")
      .def(py::init<double, double, double>(), py::arg("gamma_r") = 0.0,
           py::arg("gamma_deph") = 0.0, py::arg("gamma_bc") = 0.0)
      .def_readwrite("gamma_r", &Rates::gamma_r)
      .def_readwrite("gamma_deph", &Rates::gamma_deph)
      .def_readwrite("gamma_bc", &Rates::gamma_bc)
      .def_property_readonly("gamma", &Rates::gamma);

  py::class_<Fields>(m, "Fields")
      .def(py::init<double, double, double, double>(), py::arg("omega_d") = 0.0,
           py::arg("omega_p") = 0.0, py::arg("big_delta") = 0.0, py::arg("small_delta") = 0.0)
      .def_readwrite("omega_d", &Fields::omega_d)
      .def_readwrite("omega_p", &Fields::omega_p)
      .def_readwrite("big_delta", &Fields::big_delta)
      .def_readwrite("small_delta", &Fields::small_delta);

  py::class_<Medium>(m, "Medium")
      .def(py::init<double, double, double, double>(), py::arg("density") = 0.0,
           py::arg("length") = 0.0, py::arg("wavelength") = 0.0, py::arg("ku") = 0.0)
      .def_readwrite("density", &Medium::density)
      .def_readwrite("length", &Medium::length)
      .def_readwrite("wavelength", &Medium::wavelength)
      .def_readwrite("ku", &Medium::ku);

  m.def("kappa", &kappa, py::arg("medium"), py::arg("rates"));
  m.def(
      "steady_state",
      [](const Rates& r, const Fields& f) { return steady_state(r, f).matrix(); },
      py::arg("rates"), py::arg("fields"),
      "3x3 complex density matrix in the (a, b, c) basis");
  m.def(
      "susceptibility_numeric",
      [](const Rates& r, const Fields& f, const Medium& md) {
        return susceptibility_numeric(r, f, md);
      },
      py::arg("rates"), py::arg("fields"), py::arg("medium"));
  m.def("susceptibility_analytic", &susceptibility_analytic, py::arg("rates"), py::arg("fields"),
        py::arg("medium"));
  m.def(
      "population_differences",
      [](const Rates& r, const Fields& f) {
        const auto p = population_differences(r, f);
        return py::make_tuple(p.aa_minus_bb, p.aa_minus_cc);
      },
      py::arg("rates"), py::arg("fields"));

  py::class_<LineshapeParams>(m, "LineshapeParams")
      .def(py::init<double, double, double, double, double>(), py::arg("A") = 0.0,
           py::arg("B") = 0.0, py::arg("C") = 0.0, py::arg("gamma_tilde") = 0.0,
           py::arg("delta0") = 0.0)
      .def_readwrite("A", &LineshapeParams::A)
      .def_readwrite("B", &LineshapeParams::B)
      .def_readwrite("C", &LineshapeParams::C)
      .def_readwrite("gamma_tilde", &LineshapeParams::gamma_tilde)
      .def_readwrite("delta0", &LineshapeParams::delta0);

  py::class_<PolarForm>(m, "PolarForm")
      .def_readonly("D", &PolarForm::D)
      .def_readonly("phi", &PolarForm::phi)
      .def_readonly("C", &PolarForm::C);

  m.def("lineshape", &lineshape, py::arg("params"), py::arg("delta"));
  m.def("to_polar", &to_polar, py::arg("A"), py::arg("B"), py::arg("C") = 0.0);
  m.def("ac_stark_shift", &ac_stark_shift, py::arg("big_delta"), py::arg("omega_d"),
        py::arg("gamma"));
  m.def("resonance_width", &resonance_width, py::arg("big_delta"), py::arg("omega_d"),
        py::arg("gamma"), py::arg("gamma_bc"));
  m.def("absorption_profile", &absorption_profile, py::arg("rates"), py::arg("fields"),
        py::arg("medium"));
  m.def(
      "lineshape_coefficients",
      [](const Rates& r, const Fields& f, const Medium& md) {
        const auto c = lineshape_coefficients(r, f, md);
        return py::dict(py::arg("A") = c.A, py::arg("B") = c.B, py::arg("C") = c.C,
                        py::arg("eta") = c.eta);
      },
      py::arg("rates"), py::arg("fields"), py::arg("medium"));
  m.def(
      "sign_change_detuning",
      [](const Rates& r, const Fields& f) {
        const auto s = sign_change_detuning(r, f);
        return py::make_tuple(s.numeric, s.approximate);
      },
      py::arg("rates"), py::arg("fields"));
  m.def("density_narrowed_width", &density_narrowed_width, py::arg("medium"), py::arg("rates"),
        py::arg("fields"));

  py::enum_<QuadratureScheme>(m, "QuadratureScheme")
      .value("gauss_hermite", QuadratureScheme::gauss_hermite)
      .value("trapezoid", QuadratureScheme::trapezoid)
      .value("adaptive", QuadratureScheme::adaptive);

  py::class_<QuadratureSpec>(m, "QuadratureSpec")
      .def(py::init<>())
      .def_readwrite("scheme", &QuadratureSpec::scheme)
      .def_readwrite("node_count", &QuadratureSpec::node_count)
      .def_readwrite("truncation", &QuadratureSpec::truncation)
      .def_readwrite("tolerance", &QuadratureSpec::tolerance)
      .def_readwrite("max_panels", &QuadratureSpec::max_panels);

  m.def(
      "doppler_average",
      [](const std::function<cplx(double)>& f, double big_delta, double ku,
         const QuadratureSpec& quad) { return doppler_average(f, big_delta, ku, quad); },
      py::arg("chi_of_detuning"), py::arg("big_delta"), py::arg("ku"),
      py::arg("quad") = QuadratureSpec{});

  py::class_<SlabConfig>(m, "SlabConfig")
      .def(py::init<>())
      .def_readwrite("slab_count", &SlabConfig::slab_count)
      .def_readwrite("richardson_check", &SlabConfig::richardson_check)
      .def_readwrite("drive_attenuation", &SlabConfig::drive_attenuation);

  py::class_<Spectrum>(m, "Spectrum")
      .def(py::init<>())
      .def(py::init([](std::vector<double> grid, std::vector<double> t) {
             Spectrum s;
             s.delta_grid = std::move(grid);
             s.transmission = std::move(t);
             s.validate();
             return s;
           }),
           py::arg("delta_grid"), py::arg("transmission"))
      .def_readwrite("delta_grid", &Spectrum::delta_grid)
      .def_readwrite("transmission", &Spectrum::transmission)
      .def_readonly("normalized", &Spectrum::normalized)
      .def_readonly("gain_flag", &Spectrum::gain_flag)
      .def_readonly("richardson_change", &Spectrum::richardson_change);

  m.def(
      "transmit",
      [](const Rates& r, const Fields& f, const Medium& md, const QuadratureSpec& q,
         const SlabConfig& s, const std::vector<double>& grid) {
        py::gil_scoped_release release;
        return transmit(r, f, md, q, s, grid);
      },
      py::arg("rates"), py::arg("fields"), py::arg("medium"), py::arg("quad"), py::arg("slabs"),
      py::arg("delta_grid"));
  m.def(
      "normalize",
      [](const Spectrum& s) {
        py::gil_scoped_release release;
        return normalize(s);
      },
      py::arg("spectrum"));
  m.def("uniform_grid", &uniform_grid, py::arg("center"), py::arg("span"), py::arg("points"));

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("params", &FitResult::params)
      .def_readonly("polar", &FitResult::polar)
      .def_readonly("residual_rms", &FitResult::residual_rms)
      .def_readonly("converged", &FitResult::converged)
      .def_readonly("iterations", &FitResult::iterations)
      .def_readonly("covariance_diagonal", &FitResult::covariance_diagonal);

  m.def(
      "fit_lineshape",
      [](const std::vector<double>& d, const std::vector<double>& v) {
        return fit_lineshape(d, v);
      },
      py::arg("delta"), py::arg("values"));
  m.def(
      "initial_guess",
      [](const std::vector<double>& d, const std::vector<double>& v) {
        return initial_guess(d, v);
      },
      py::arg("delta"), py::arg("values"));

  py::class_<DescriptorRow>(m, "DescriptorRow")
      .def_readonly("big_delta_mhz", &DescriptorRow::big_delta_mhz)
      .def_readonly("A", &DescriptorRow::A)
      .def_readonly("B", &DescriptorRow::B)
      .def_readonly("C", &DescriptorRow::C)
      .def_readonly("D", &DescriptorRow::D)
      .def_readonly("phi", &DescriptorRow::phi)
      .def_readonly("gamma_tilde_khz", &DescriptorRow::gamma_tilde_khz)
      .def_readonly("delta0_khz", &DescriptorRow::delta0_khz)
      .def_readonly("residual_rms", &DescriptorRow::residual_rms)
      .def_readonly("converged", &DescriptorRow::converged)
      .def_readonly("gain_flag", &DescriptorRow::gain_flag)
      .def_readonly("error", &DescriptorRow::error);

  m.def("load_spectrum_csv", &load_spectrum_csv, py::arg("path"));
  m.def(
      "export_spectrum_csv",
      [](const Spectrum& s, const std::filesystem::path& p) { export_csv(s, p); },
      py::arg("spectrum"), py::arg("path"));
  m.def("spectrum_csv", &spectrum_csv, py::arg("spectrum"));

  py::class_<ScanConfig>(m, "ScanConfig")
      .def_readonly("preset", &ScanConfig::preset)
      .def_readonly("warnings", &ScanConfig::warnings)
      .def_readwrite("output_dir", &ScanConfig::output_dir);
  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));
  m.def("format_config", &format_config, py::arg("config"));
  m.def("preset", &preset, py::arg("name"));
  m.def("preset_names", [] {
    std::vector<std::string> names;
    for (const auto& p : presets()) names.push_back(p.name);
    return names;
  });
  m.def(
      "run_point",
      [](const ScanConfig& c, double big_delta_mhz) {
        ScanPoint p;
        {
          py::gil_scoped_release release;
          p = run_point(c, big_delta_mhz);
        }
        return py::make_tuple(p.row, p.spectrum);
      },
      py::arg("config"), py::arg("big_delta_mhz"));

  auto hm = m.def_submodule("hanle", "dark-state algebra of the Hanle configuration");
  py::enum_<hanle::Transition>(hm, "Transition")
      .value("two_to_one", hanle::Transition::two_to_one)
      .value("two_to_two", hanle::Transition::two_to_two);
  py::class_<hanle::ZeemanState>(hm, "ZeemanState")
      .def(py::init<cplx, cplx>(), py::arg("c_plus"), py::arg("c_minus"))
      .def_readwrite("c_plus", &hanle::ZeemanState::c_plus)
      .def_readwrite("c_minus", &hanle::ZeemanState::c_minus)
      .def("normalized", &hanle::ZeemanState::normalized);
  hm.def("dark_state", &hanle::dark_state, py::arg("transition"));
  hm.def("overlap", &hanle::overlap, py::arg("s1"), py::arg("s2"));
  hm.def(
      "brightness",
      [](const hanle::ZeemanState& s, hanle::Transition t) { return hanle::brightness(s, t); },
      py::arg("state"), py::arg("transition"));
  hm.def("zeeman_detuning", &hanle::zeeman_detuning, py::arg("field_tesla"));
}
