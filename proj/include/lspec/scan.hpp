#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lspec/config.hpp"
#include "lspec/fitting.hpp"

namespace lspec {

/// Descriptors of one simulated (or measured) spectrum, in config units.
struct DescriptorRow {
  double big_delta_mhz = 0.0;
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double D = 0.0;
  double phi = 0.0;
  double gamma_tilde_khz = 0.0;
  double delta0_khz = 0.0;
  double residual_rms = 0.0;
  bool converged = false;
  bool gain_flag = false;
  std::string error;  ///< empty unless the point failed; not exported

  static DescriptorRow from_fit(double big_delta_mhz, const FitResult& fit, bool gain_flag);
  /// A failed point: all numeric descriptors NaN, converged = false.
  static DescriptorRow failure(double big_delta_mhz, bool gain_flag, std::string error);
};

struct DescriptorCurve {
  std::vector<DescriptorRow> rows;  ///< ordered by big_delta_mhz
};

/// Mirrors a spectrum onto the reported Raman axis delta_R = -delta.
Spectrum to_raman_axis(const Spectrum& spectrum);

struct ScanPoint {
  DescriptorRow row;
  std::optional<Spectrum> spectrum;  ///< normalized, on the Raman axis
};

/// transmit -> normalize -> fit at one one-photon detuning. Library errors are
/// recorded in the row instead of propagating.
ScanPoint run_point(const ScanConfig& config, double big_delta_mhz);

struct ScanResult {
  DescriptorCurve curve;
  std::vector<std::optional<Spectrum>> spectra;  ///< aligned with curve.rows
};

/// Evaluates every sweep point, concurrently on up to `threads` workers
/// (0 = hardware concurrency). Output does not depend on the thread count.
ScanResult run_scan(const ScanConfig& config, int threads = 0);

/// Thread cap from LAMBDA_SPECTRA_THREADS (unset or 0 = auto). Throws
/// ConfigError for a malformed value.
int threads_from_environment();

/// Files a finished scan writes, as (relative path, contents).
std::vector<std::pair<std::string, std::string>> scan_files(const ScanConfig& config,
                                                            const ScanResult& result);

/// Writes scan_files() into `dir`. An existing file with different contents,
/// or a stray spectrum file from another run, aborts with IoError before
/// anything is written; identical files are left as they are.
void write_scan(const ScanConfig& config, const ScanResult& result,
                const std::filesystem::path& dir);

}  // namespace lspec
