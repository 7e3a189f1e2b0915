#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lspec/propagation.hpp"

namespace lspec {

/// Two-photon (Raman) detuning grid, in kHz on the reported axis.
struct GridSpec {
  double center_khz = 0.0;
  double span_khz = 200.0;
  int points = 61;
};

/// One-photon detuning sweep, MHz. points = 1 evaluates start_mhz only.
struct SweepSpec {
  double start_mhz = 0.0;
  double stop_mhz = 2000.0;
  int points = 21;

  std::vector<double> values_mhz() const;
};

/// A complete scan description in the units of the config file.
struct ScanConfig {
  std::string preset;  ///< name of the preset it started from, if any

  double density_cm3 = 0.0;
  double length_cm = 0.0;
  double wavelength_nm = 0.0;
  double ku_mhz = 0.0;

  double gamma_r_mhz = 0.0;
  double gamma_deph_mhz = 0.0;
  double gamma_bc_khz = 0.0;

  double omega_d_mhz = 0.0;
  double omega_p_mhz = 0.0;

  GridSpec grid;
  SweepSpec sweep;
  QuadratureSpec quad;
  SlabConfig slabs;

  std::string output_dir = "scan_output";
  bool write_spectra = true;

  /// Non-fatal remarks collected while parsing (e.g. unsupported presets).
  std::vector<std::string> warnings;

  /// Throws ConfigError naming the offending key.
  void validate() const;

  /// Internal-unit parameters for one-photon detuning `big_delta_mhz`.
  SimulationParams simulation(double big_delta_mhz) const;
  /// Reported Raman-detuning grid in rad/s, increasing.
  std::vector<double> raman_grid() const;
};

/// Parses the INI text of a scan config. Unknown sections or keys, malformed
/// values and missing required keys raise ConfigError; syntax errors raise
/// ParseError with the line number. `[scan] preset = <name>` starts from a
/// preset, after which every key is an optional override.
ScanConfig parse_config(std::string_view text);
/// Reads and parses a file; IoError when it cannot be read.
ScanConfig load_config(const std::filesystem::path& path);

/// Canonical INI text; parse_config(format_config(c)) reproduces every
/// parameter of c (the preset name and warnings are not written).
std::string format_config(const ScanConfig& config);

struct PresetInfo {
  std::string name;
  std::string description;
  bool supported;  ///< false when the model is known not to apply
};

const std::vector<PresetInfo>& presets();
/// Throws ConfigError for an unknown name.
ScanConfig preset(std::string_view name);

}  // namespace lspec
