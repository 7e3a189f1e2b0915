#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "lspec/scan.hpp"

namespace lspec {

inline constexpr std::string_view spectrum_header = "delta_mhz,transmission";
inline constexpr std::string_view descriptor_header =
    "delta_1photon_mhz,A,B,C,D,phi_rad,gamma_tilde_khz,delta0_khz,residual_rms,converged,gain_flag";

/// Number with 12 significant digits, as used in every CSV.
std::string format_number(double v);

std::string spectrum_csv(const Spectrum& spectrum);
std::string descriptor_csv(const DescriptorCurve& curve);
std::string descriptor_line(const DescriptorRow& row);

/// Parses spectrum CSV text. SchemaMismatch on a wrong header; ParseError
/// (with the 1-based line) on malformed values or a non-increasing grid.
Spectrum parse_spectrum_csv(std::string_view text);
/// IoError when the file cannot be read.
Spectrum load_spectrum_csv(const std::filesystem::path& path);

/// Byte-deterministic writers; IoError on failure.
void export_csv(const Spectrum& spectrum, const std::filesystem::path& path);
void export_csv(const DescriptorCurve& curve, const std::filesystem::path& path);

/// Writes `contents` to `path` via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace lspec
