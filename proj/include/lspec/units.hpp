#pragma once

#include <numbers>

// Internal convention: every rate and detuning is an angular frequency in
// rad/s, lengths are metres and densities are per cubic metre. Conversions to
// the ordinary-frequency units used in configs and CSV files happen only here.
namespace lspec::units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr double from_mhz(double f) { return two_pi * 1e6 * f; }
constexpr double from_khz(double f) { return two_pi * 1e3 * f; }
constexpr double to_mhz(double w) { return w / (two_pi * 1e6); }
constexpr double to_khz(double w) { return w / (two_pi * 1e3); }

constexpr double from_per_cm3(double n) { return n * 1e6; }
constexpr double from_cm(double l) { return l * 1e-2; }
constexpr double from_nm(double l) { return l * 1e-9; }
constexpr double to_per_cm3(double n) { return n * 1e-6; }
constexpr double to_cm(double l) { return l * 1e2; }
constexpr double to_nm(double l) { return l * 1e9; }

}  // namespace lspec::units
