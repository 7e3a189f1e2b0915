#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "lspec/csv.hpp"
#include "lspec/hanle.hpp"
#include "lspec/scan.hpp"
#include "lspec/units.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_io = 3;

void print_warnings(const lspec::ScanConfig& config) {
  for (const auto& w : config.warnings) fmt::print(stderr, "warning: {}\n", w);
}

int cmd_run(const std::string& path, const std::string& output, int threads) {
  const auto config = lspec::load_config(path);
  print_warnings(config);
  const int workers = threads >= 0 ? threads : lspec::threads_from_environment();
  const auto result = lspec::run_scan(config, workers);
  const std::filesystem::path dir = output.empty() ? config.output_dir : output;
  lspec::write_scan(config, result, dir);
  int failed = 0;
  for (const auto& row : result.curve.rows) {
    if (!row.error.empty()) {
      ++failed;
      fmt::print(stderr, "point Delta = {} MHz: {}\n", lspec::format_number(row.big_delta_mhz),
                 row.error);
    } else if (!row.converged) {
      fmt::print(stderr, "point Delta = {} MHz: fit did not converge\n",
                 lspec::format_number(row.big_delta_mhz));
    }
  }
  fmt::print("{} points ({} failed) written to {}\n", result.curve.rows.size(), failed,
             dir.string());
  return 0;
}

int cmd_fit(const std::string& path, double big_delta_mhz, const std::string& output) {
  const auto spectrum = lspec::load_spectrum_csv(path);
  lspec::DescriptorCurve curve;
  try {
    curve.rows.push_back(
        lspec::DescriptorRow::from_fit(big_delta_mhz, lspec::fit_lineshape(spectrum), false));
  } catch (const lspec::DegenerateSpectrum& e) {
    curve.rows.push_back(lspec::DescriptorRow::failure(big_delta_mhz, false, e.what()));
    fmt::print(stderr, "{}\n", e.what());
  }
  if (output.empty()) {
    fmt::print("{}", lspec::descriptor_csv(curve));
  } else {
    lspec::export_csv(curve, output);
  }
  return curve.rows.front().error.empty() ? 0 : 1;
}

int cmd_presets(const std::string& name) {
  if (!name.empty()) {
    const auto config = lspec::preset(name);
    print_warnings(config);
    fmt::print("{}", lspec::format_config(config));
    return 0;
  }
  for (const auto& p : lspec::presets()) {
    fmt::print("{:<12} {}{}\n", p.name, p.description, p.supported ? "" : " [unsupported]");
  }
  return 0;
}

int cmd_validate(const std::string& path) {
  const auto config = lspec::load_config(path);
  print_warnings(config);
  fmt::print("{}: ok ({} sweep points x {} grid points)\n", path, config.sweep.points,
             config.grid.points);
  return 0;
}

int cmd_hanle(double field_ut) {
  using namespace lspec::hanle;
  const auto d1 = dark_state(Transition::two_to_one);
  const auto d2 = dark_state(Transition::two_to_two);
  auto amp = [](cplx c) { return fmt::format("{:+.6f}{:+.6f}i", c.real(), c.imag()); };
  fmt::print("{:<12} {:>20} {:>20}\n", "state", "c(+1)", "c(-1)");
  fmt::print("{:<12} {:>20} {:>20}\n", "dark 2->1", amp(d1.c_plus), amp(d1.c_minus));
  fmt::print("{:<12} {:>20} {:>20}\n", "dark 2->2", amp(d2.c_plus), amp(d2.c_minus));
  const auto o = overlap(d1, d2);
  fmt::print("\noverlap <dark 2->1|dark 2->2> = {}\n\n", amp(o));
  fmt::print("{:<12} {:>10} {:>10}\n", "brightness", "2->1", "2->2");
  for (const auto& [label, s] : {std::pair{"dark 2->1", d1}, std::pair{"dark 2->2", d2}}) {
    fmt::print("{:<12} {:>10.6f} {:>10.6f}\n", label, brightness(s, Transition::two_to_one),
               brightness(s, Transition::two_to_two));
  }
  const double delta = zeeman_detuning(field_ut * 1e-6);
  fmt::print("\nB = {} uT -> two-photon detuning {} kHz\n", lspec::format_number(field_ut),
             lspec::format_number(lspec::units::to_khz(delta)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lambda-system EIT spectra: simulate, fit and tabulate lineshape descriptors"};
  app.require_subcommand(1);

  std::string config_path, spectrum_path, output, preset_name;
  int threads = -1;
  double big_delta_mhz = std::numeric_limits<double>::quiet_NaN();
  double field_ut = 1.0;

  auto* run = app.add_subcommand("run", "simulate a detuning sweep described by a config file");
  run->add_option("config", config_path, "INI config")->required();
  run->add_option("-o,--output", output, "output directory (overrides [output] directory)");
  run->add_option("-j,--threads", threads,
                  "worker threads, 0 = auto (default: LAMBDA_SPECTRA_THREADS)");

  auto* fit = app.add_subcommand("fit", "fit the empirical lineshape to a spectrum CSV");
  fit->add_option("spectrum", spectrum_path, "CSV with header delta_mhz,transmission")
      ->required();
  fit->add_option("--big-delta-mhz", big_delta_mhz,
                  "one-photon detuning to record in the delta_1photon_mhz column");
  fit->add_option("-o,--output", output, "write the descriptor CSV here instead of stdout");

  auto* presets = app.add_subcommand("presets", "list presets, or print one as a config");
  presets->add_option("name", preset_name, "preset to print");

  auto* validate = app.add_subcommand("validate", "check a config file without running it");
  validate->add_option("config", config_path, "INI config")->required();

  auto* hanle = app.add_subcommand("hanle", "dark states and brightness of the Hanle configuration");
  hanle->add_option("--field-ut", field_ut, "magnetic field for the detuning line, in uT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  try {
    if (*run) return cmd_run(config_path, output, threads);
    if (*fit) return cmd_fit(spectrum_path, big_delta_mhz, output);
    if (*presets) return cmd_presets(preset_name);
    if (*validate) return cmd_validate(config_path);
    if (*hanle) return cmd_hanle(field_ut);
  } catch (const lspec::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return exit_config;
  } catch (const lspec::IoError& e) {
    fmt::print(stderr, "i/o error: {}\n", e.what());
    return exit_io;
  } catch (const lspec::ParseError& e) {
    fmt::print(stderr, "parse error: {}\n", e.what());
    return *fit ? exit_io : exit_config;
  } catch (const lspec::SchemaMismatch& e) {
    fmt::print(stderr, "schema mismatch: {}\n", e.what());
    return exit_io;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 1;
}
