#include "lspec/scan.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "lspec/csv.hpp"
#include "lspec/units.hpp"

namespace lspec {

DescriptorRow DescriptorRow::from_fit(double big_delta_mhz, const FitResult& fit, bool gain_flag) {
  DescriptorRow r;
  r.big_delta_mhz = big_delta_mhz;
  r.A = fit.params.A;
  r.B = fit.params.B;
  r.C = fit.params.C;
  r.D = fit.polar.D;
  r.phi = fit.polar.phi;
  r.gamma_tilde_khz = units::to_khz(fit.params.gamma_tilde);
  r.delta0_khz = units::to_khz(fit.params.delta0);
  r.residual_rms = fit.residual_rms;
  r.converged = fit.converged;
  r.gain_flag = gain_flag;
  return r;
}

DescriptorRow DescriptorRow::failure(double big_delta_mhz, bool gain_flag, std::string error) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  DescriptorRow r;
  r.big_delta_mhz = big_delta_mhz;
  r.A = r.B = r.C = r.D = r.phi = r.gamma_tilde_khz = r.delta0_khz = r.residual_rms = nan;
  r.converged = false;
  r.gain_flag = gain_flag;
  r.error = std::move(error);
  return r;
}

Spectrum to_raman_axis(const Spectrum& spectrum) {
  Spectrum out = spectrum;
  out.metadata.reset();
  const std::size_t n = spectrum.delta_grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    out.delta_grid[i] = -spectrum.delta_grid[n - 1 - i];
    out.transmission[i] = spectrum.transmission[n - 1 - i];
  }
  return out;
}

ScanPoint run_point(const ScanConfig& config, double big_delta_mhz) {
  const auto params = config.simulation(big_delta_mhz);
  const auto raman = config.raman_grid();
  std::vector<double> model(raman.size());
  for (std::size_t i = 0; i < raman.size(); ++i) model[i] = -raman[raman.size() - 1 - i];

  ScanPoint point;
  bool gain = false;
  try {
    const auto spectrum = transmit(params, model);
    gain = spectrum.gain_flag;
    point.spectrum = to_raman_axis(normalize(spectrum));
  } catch (const Error& e) {
    point.row = DescriptorRow::failure(big_delta_mhz, gain, e.what());
    return point;
  }
  try {
    point.row = DescriptorRow::from_fit(big_delta_mhz, fit_lineshape(*point.spectrum), gain);
  } catch (const Error& e) {
    point.row = DescriptorRow::failure(big_delta_mhz, gain, e.what());
  }
  return point;
}

int threads_from_environment() {
  const char* raw = std::getenv("LAMBDA_SPECTRA_THREADS");
  if (!raw || !*raw) return 0;
  const std::string_view s(raw);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 0) {
    throw ConfigError("LAMBDA_SPECTRA_THREADS", "expected a non-negative integer, got '" +
                                                    std::string(s) + "'");
  }
  return v;
}

ScanResult run_scan(const ScanConfig& config, int threads) {
  config.validate();
  const auto values = config.sweep.values_mhz();
  const std::size_t n = values.size();
  std::vector<ScanPoint> points(n);

  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        points[i] = run_point(config, values[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  ScanResult result;
  for (auto& p : points) {
    result.curve.rows.push_back(std::move(p.row));
    result.spectra.push_back(std::move(p.spectrum));
  }
  return result;
}

std::vector<std::pair<std::string, std::string>> scan_files(const ScanConfig& config,
                                                            const ScanResult& result) {
  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("descriptors.csv", descriptor_csv(result.curve));
  if (config.write_spectra) {
    for (std::size_t i = 0; i < result.spectra.size(); ++i) {
      if (!result.spectra[i]) continue;
      files.emplace_back(fmt::format("spectra/spectrum_{:03}.csv", i),
                         spectrum_csv(*result.spectra[i]));
    }
  }
  return files;
}

void write_scan(const ScanConfig& config, const ScanResult& result,
                const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  const auto files = scan_files(config, result);

  std::set<std::string> expected;
  std::vector<std::string> conflicts;
  std::vector<const std::pair<std::string, std::string>*> pending;
  for (const auto& f : files) {
    expected.insert(f.first);
    const fs::path target = dir / f.first;
    std::error_code ec;
    if (fs::exists(target, ec)) {
      if (read_file(target) != f.second) conflicts.push_back(f.first);
    } else {
      pending.push_back(&f);
    }
  }
  std::error_code ec;
  if (fs::is_directory(dir / "spectra", ec)) {
    for (const auto& entry : fs::directory_iterator(dir / "spectra")) {
      const std::string rel = "spectra/" + entry.path().filename().string();
      if (entry.path().extension() == ".csv" && !expected.count(rel)) conflicts.push_back(rel);
    }
  }
  if (!conflicts.empty()) {
    throw IoError(fmt::format(
        "{} already holds results of a different scan ({} and {} other file(s) differ); "
        "refusing to mix outputs, choose another output directory",
        dir.string(), conflicts.front(), conflicts.size() - 1));
  }
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  if (config.write_spectra) {
    fs::create_directories(dir / "spectra", ec);
    if (ec) throw IoError("cannot create " + (dir / "spectra").string() + ": " + ec.message());
  }
  for (const auto* f : pending) write_file_atomic(dir / f->first, f->second);
}

}  // namespace lspec
