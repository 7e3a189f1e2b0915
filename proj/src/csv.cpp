#include "lspec/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "lspec/units.hpp"

namespace lspec {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_cell(std::string_view cell, std::size_t line, std::string_view column) {
  cell = trim(cell);
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(fmt::format("line {}, column '{}': '{}' is not a number", line, column, cell),
                     line);
  }
  if (!std::isfinite(v)) {
    throw ParseError(fmt::format("line {}, column '{}': value is not finite", line, column), line);
  }
  return v;
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) return "0";
  return fmt::format("{:.12g}", v);
}

std::string spectrum_csv(const Spectrum& spectrum) {
  std::string out(spectrum_header);
  out += '\n';
  for (std::size_t i = 0; i < spectrum.delta_grid.size(); ++i) {
    out += format_number(units::to_mhz(spectrum.delta_grid[i]));
    out += ',';
    out += format_number(spectrum.transmission[i]);
    out += '\n';
  }
  return out;
}

std::string descriptor_line(const DescriptorRow& r) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{}", format_number(r.big_delta_mhz),
                     format_number(r.A), format_number(r.B), format_number(r.C),
                     format_number(r.D), format_number(r.phi), format_number(r.gamma_tilde_khz),
                     format_number(r.delta0_khz), format_number(r.residual_rms),
                     r.converged ? "true" : "false", r.gain_flag ? "true" : "false");
}

std::string descriptor_csv(const DescriptorCurve& curve) {
  std::string out(descriptor_header);
  out += '\n';
  for (const auto& row : curve.rows) {
    out += descriptor_line(row);
    out += '\n';
  }
  return out;
}

Spectrum parse_spectrum_csv(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  Spectrum s;
  std::size_t line = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view row = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line;
    row = trim(row);
    if (!header_seen) {
      if (row != spectrum_header) {
        throw SchemaMismatch(fmt::format("expected header '{}', found '{}'", spectrum_header, row));
      }
      header_seen = true;
      continue;
    }
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError(fmt::format("line {}: expected 2 comma-separated columns", line), line);
    }
    const double d = parse_cell(row.substr(0, comma), line, "delta_mhz");
    const double t = parse_cell(row.substr(comma + 1), line, "transmission");
    if (t < 0.0) {
      throw ParseError(fmt::format("line {}, column 'transmission': negative value", line), line);
    }
    const double delta = units::from_mhz(d);
    if (!s.delta_grid.empty() && !(delta > s.delta_grid.back())) {
      throw ParseError(fmt::format("line {}: delta_mhz is not strictly increasing", line), line);
    }
    s.delta_grid.push_back(delta);
    s.transmission.push_back(t);
  }
  if (!header_seen) throw SchemaMismatch("empty file: missing header");
  if (s.delta_grid.empty()) throw ParseError("no data rows", line);
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading " + path.string());
  return buf.str();
}

Spectrum load_spectrum_csv(const std::filesystem::path& path) {
  return parse_spectrum_csv(read_file(path));
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("error while writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

void export_csv(const Spectrum& spectrum, const std::filesystem::path& path) {
  spectrum.validate();
  write_file_atomic(path, spectrum_csv(spectrum));
}

void export_csv(const DescriptorCurve& curve, const std::filesystem::path& path) {
  write_file_atomic(path, descriptor_csv(curve));
}

}  // namespace lspec
