#include "lspec/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "lspec/units.hpp"

namespace lspec {

namespace pt = boost::property_tree;

std::vector<double> SweepSpec::values_mhz() const {
  std::vector<double> v;
  if (points == 1) return {start_mhz};
  for (int i = 0; i < points; ++i) {
    v.push_back(start_mhz + (stop_mhz - start_mhz) * i / (points - 1));
  }
  return v;
}

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

void nonnegative(double v, const std::string& field) {
  require(std::isfinite(v) && v >= 0.0, field, "must be finite and >= 0");
}

std::string scheme_name(QuadratureScheme s) {
  switch (s) {
    case QuadratureScheme::gauss_hermite: return "gauss_hermite";
    case QuadratureScheme::trapezoid: return "trapezoid";
    case QuadratureScheme::adaptive: return "adaptive";
  }
  return "adaptive";
}

double parse_double(const std::string& s, const std::string& field) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  require(ec == std::errc() && ptr == end && std::isfinite(v), field,
          "expected a finite number, got '" + s + "'");
  return v;
}

int parse_int(const std::string& s, const std::string& field) {
  int v = 0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  require(ec == std::errc() && ptr == end, field, "expected an integer, got '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s, const std::string& field) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw ConfigError(field, "expected true or false, got '" + s + "'");
}

QuadratureScheme parse_scheme(const std::string& s, const std::string& field) {
  if (s == "gauss_hermite") return QuadratureScheme::gauss_hermite;
  if (s == "trapezoid") return QuadratureScheme::trapezoid;
  if (s == "adaptive") return QuadratureScheme::adaptive;
  throw ConfigError(field, "expected gauss_hermite, trapezoid or adaptive, got '" + s + "'");
}

// Every accepted key, its setter, and whether a config without a preset must set it.
struct Key {
  std::function<void(ScanConfig&, const std::string&, const std::string&)> set;
  bool required;
};

const std::map<std::string, std::map<std::string, Key>>& schema() {
  static const auto table = [] {
    std::map<std::string, std::map<std::string, Key>> t;
    auto number = [](double ScanConfig::*m) {
      return [m](ScanConfig& c, const std::string& v, const std::string& f) {
        c.*m = parse_double(v, f);
      };
    };
    t["scan"]["preset"] = {[](ScanConfig&, const std::string&, const std::string&) {}, false};
    t["medium"]["density_cm3"] = {number(&ScanConfig::density_cm3), true};
    t["medium"]["length_cm"] = {number(&ScanConfig::length_cm), true};
    t["medium"]["wavelength_nm"] = {number(&ScanConfig::wavelength_nm), true};
    t["medium"]["ku_mhz"] = {number(&ScanConfig::ku_mhz), true};
    t["rates"]["gamma_r_mhz"] = {number(&ScanConfig::gamma_r_mhz), true};
    t["rates"]["gamma_deph_mhz"] = {number(&ScanConfig::gamma_deph_mhz), true};
    t["rates"]["gamma_bc_khz"] = {number(&ScanConfig::gamma_bc_khz), true};
    t["fields"]["omega_d_mhz"] = {number(&ScanConfig::omega_d_mhz), true};
    t["fields"]["omega_p_mhz"] = {number(&ScanConfig::omega_p_mhz), true};
    t["grid"]["center_khz"] = {[](ScanConfig& c, const std::string& v, const std::string& f) {
                                 c.grid.center_khz = parse_double(v, f);
                               }, true};
    t["grid"]["span_khz"] = {[](ScanConfig& c, const std::string& v, const std::string& f) {
                               c.grid.span_khz = parse_double(v, f);
                             }, true};
    t["grid"]["points"] = {[](ScanConfig& c, const std::string& v, const std::string& f) {
                             c.grid.points = parse_int(v, f);
                           }, true};
    t["sweep"]["start_mhz"] = {[](ScanConfig& c, const std::string& v, const std::string& f) {
                                 c.sweep.start_mhz = parse_double(v, f);
                               }, true};
    t["sweep"]["stop_mhz"] = {[](ScanConfig& c, const std::string& v, const std::string& f) {
                                c.sweep.stop_mhz = parse_double(v, f);
                              }, true};
    t["sweep"]["points"] = {[](ScanConfig& c, const std::string& v, const std::string& f) {
                              c.sweep.points = parse_int(v, f);
                            }, true};
    t["quadrature"]["scheme"] = {[](ScanConfig& c, const std::string& v, const std::string& f) {
                                   c.quad.scheme = parse_scheme(v, f);
                                 }, false};
    t["quadrature"]["nodes"] = {[](ScanConfig& c, const std::string& v, const std::string& f) {
                                  c.quad.node_count = parse_int(v, f);
                                }, false};
    t["quadrature"]["truncation_ku"] = {
        [](ScanConfig& c, const std::string& v, const std::string& f) {
          c.quad.truncation = parse_double(v, f);
        }, false};
    t["quadrature"]["tolerance"] = {[](ScanConfig& c, const std::string& v, const std::string& f) {
                                      c.quad.tolerance = parse_double(v, f);
                                    }, false};
    t["quadrature"]["max_panels"] = {[](ScanConfig& c, const std::string& v, const std::string& f) {
                                       c.quad.max_panels = parse_int(v, f);
                                     }, false};
    t["slabs"]["count"] = {[](ScanConfig& c, const std::string& v, const std::string& f) {
                             c.slabs.slab_count = parse_int(v, f);
                           }, false};
    t["slabs"]["richardson_check"] = {
        [](ScanConfig& c, const std::string& v, const std::string& f) {
          c.slabs.richardson_check = parse_bool(v, f);
        }, false};
    t["slabs"]["drive_attenuation"] = {
        [](ScanConfig& c, const std::string& v, const std::string& f) {
          c.slabs.drive_attenuation = parse_bool(v, f);
        }, false};
    t["output"]["directory"] = {[](ScanConfig& c, const std::string& v, const std::string& f) {
                                  require(!v.empty(), f, "must not be empty");
                                  c.output_dir = v;
                                }, false};
    t["output"]["spectra"] = {[](ScanConfig& c, const std::string& v, const std::string& f) {
                                c.write_spectra = parse_bool(v, f);
                              }, false};
    return t;
  }();
  return table;
}

struct PresetValues {
  PresetInfo info;
  double gamma_deph_mhz;
  double gamma_bc_khz;
  double span_khz;
  double sweep_stop_mhz;
};

const std::vector<PresetValues>& preset_table() {
  static const std::vector<PresetValues> table = {
      {{"vacuum", "no buffer gas: gamma_deph = 0, gamma_bc = 30 kHz", true}, 0.0, 30.0, 2000.0,
       1000.0},
      {{"kr_0.12torr",
        "0.12 Torr Kr: gamma_deph = 0.6 MHz, gamma_bc = 10 kHz (diffusion-limited; outside "
        "the model)",
        false},
       0.6, 10.0, 1000.0, 1000.0},
      {{"ne_30torr", "30 Torr Ne: gamma_deph = 150 MHz, gamma_bc = 0.7 kHz", true}, 150.0, 0.7,
       200.0, 2000.0},
      {{"ne_100torr", "100 Torr Ne: gamma_deph = 450 MHz, gamma_bc = 0.5 kHz", true}, 450.0, 0.5,
       200.0, 2000.0},
  };
  return table;
}

}  // namespace

void ScanConfig::validate() const {
  nonnegative(density_cm3, "medium.density_cm3");
  nonnegative(length_cm, "medium.length_cm");
  require(length_cm > 0.0, "medium.length_cm", "must be > 0");
  nonnegative(wavelength_nm, "medium.wavelength_nm");
  nonnegative(ku_mhz, "medium.ku_mhz");
  nonnegative(gamma_r_mhz, "rates.gamma_r_mhz");
  nonnegative(gamma_deph_mhz, "rates.gamma_deph_mhz");
  nonnegative(gamma_bc_khz, "rates.gamma_bc_khz");
  require(gamma_r_mhz > 0.0 || gamma_bc_khz > 0.0, "rates",
          "gamma_r_mhz or gamma_bc_khz must be > 0 for a unique steady state");
  nonnegative(omega_d_mhz, "fields.omega_d_mhz");
  nonnegative(omega_p_mhz, "fields.omega_p_mhz");
  require(omega_p_mhz > 0.0, "fields.omega_p_mhz", "must be > 0");
  require(omega_p_mhz <= omega_d_mhz, "fields.omega_p_mhz",
          "must not exceed omega_d_mhz (weak-probe model)");
  require(std::isfinite(grid.center_khz), "grid.center_khz", "must be finite");
  require(std::isfinite(grid.span_khz) && grid.span_khz > 0.0, "grid.span_khz", "must be > 0");
  require(grid.points >= 7, "grid.points", "must be >= 7");
  require(std::isfinite(sweep.start_mhz), "sweep.start_mhz", "must be finite");
  require(std::isfinite(sweep.stop_mhz), "sweep.stop_mhz", "must be finite");
  require(sweep.points >= 1, "sweep.points", "must be >= 1");
  require(sweep.points == 1 || sweep.stop_mhz > sweep.start_mhz, "sweep.stop_mhz",
          "must exceed start_mhz when points > 1");
  try {
    quad.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError("quadrature", e.what());
  }
  try {
    slabs.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError("slabs.count", e.what());
  }
}

SimulationParams ScanConfig::simulation(double big_delta_mhz) const {
  using namespace units;
  SimulationParams p;
  p.rates = {from_mhz(gamma_r_mhz), from_mhz(gamma_deph_mhz), from_khz(gamma_bc_khz)};
  p.fields = {from_mhz(omega_d_mhz), from_mhz(omega_p_mhz), from_mhz(big_delta_mhz), 0.0};
  p.medium = {from_per_cm3(density_cm3), from_cm(length_cm), from_nm(wavelength_nm),
              from_mhz(ku_mhz)};
  p.quad = quad;
  p.slabs = slabs;
  return p;
}

std::vector<double> ScanConfig::raman_grid() const {
  return uniform_grid(units::from_khz(grid.center_khz), units::from_khz(grid.span_khz),
                      grid.points);
}

ScanConfig parse_config(std::string_view text) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(fmt::format("line {}: {}", e.line(), e.message()), e.line());
  }

  const auto& table = schema();
  ScanConfig config;
  if (auto name = tree.get_optional<std::string>("scan.preset")) {
    config = preset(*name);
  }
  const bool from_preset = !config.preset.empty();

  for (const auto& [section, body] : tree) {
    const auto sec = table.find(section);
    if (body.empty() && !body.data().empty()) {
      throw ConfigError(section, "keys must appear inside a [section]");
    }
    if (sec == table.end()) throw ConfigError(section, "unknown section");
    for (const auto& [key, value] : body) {
      const std::string field = section + "." + key;
      const auto k = sec->second.find(key);
      if (k == sec->second.end()) throw ConfigError(field, "unknown key");
      if (!value.empty()) throw ConfigError(field, "nested keys are not allowed");
      k->second.set(config, value.data(), field);
    }
  }
  if (!from_preset) {
    for (const auto& [section, keys] : table) {
      for (const auto& [key, spec] : keys) {
        if (spec.required && !tree.get_child_optional(section + "." + key)) {
          throw ConfigError(section + "." + key, "missing (required without a preset)");
        }
      }
    }
  }
  config.validate();
  return config;
}

ScanConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string format_config(const ScanConfig& c) {
  auto num = [](double v) { return fmt::format("{:.12g}", v); };
  auto flag = [](bool b) { return b ? "true" : "false"; };
  std::string s;
  s += "[medium]\n";
  s += "density_cm3 = " + num(c.density_cm3) + "\n";
  s += "length_cm = " + num(c.length_cm) + "\n";
  s += "wavelength_nm = " + num(c.wavelength_nm) + "\n";
  s += "ku_mhz = " + num(c.ku_mhz) + "\n\n";
  s += "[rates]\n";
  s += "gamma_r_mhz = " + num(c.gamma_r_mhz) + "\n";
  s += "gamma_deph_mhz = " + num(c.gamma_deph_mhz) + "\n";
  s += "gamma_bc_khz = " + num(c.gamma_bc_khz) + "\n\n";
  s += "[fields]\n";
  s += "omega_d_mhz = " + num(c.omega_d_mhz) + "\n";
  s += "omega_p_mhz = " + num(c.omega_p_mhz) + "\n\n";
  s += "[grid]\n";
  s += "center_khz = " + num(c.grid.center_khz) + "\n";
  s += "span_khz = " + num(c.grid.span_khz) + "\n";
  s += fmt::format("points = {}\n\n", c.grid.points);
  s += "[sweep]\n";
  s += "start_mhz = " + num(c.sweep.start_mhz) + "\n";
  s += "stop_mhz = " + num(c.sweep.stop_mhz) + "\n";
  s += fmt::format("points = {}\n\n", c.sweep.points);
  s += "[quadrature]\n";
  s += "scheme = " + scheme_name(c.quad.scheme) + "\n";
  s += fmt::format("nodes = {}\n", c.quad.node_count);
  s += "truncation_ku = " + num(c.quad.truncation) + "\n";
  s += "tolerance = " + num(c.quad.tolerance) + "\n";
  s += fmt::format("max_panels = {}\n\n", c.quad.max_panels);
  s += "[slabs]\n";
  s += fmt::format("count = {}\n", c.slabs.slab_count);
  s += fmt::format("richardson_check = {}\n", flag(c.slabs.richardson_check));
  s += fmt::format("drive_attenuation = {}\n\n", flag(c.slabs.drive_attenuation));
  s += "[output]\n";
  s += "directory = " + c.output_dir + "\n";
  s += fmt::format("spectra = {}\n", flag(c.write_spectra));
  return s;
}

const std::vector<PresetInfo>& presets() {
  static const std::vector<PresetInfo> infos = [] {
    std::vector<PresetInfo> v;
    for (const auto& p : preset_table()) v.push_back(p.info);
    return v;
  }();
  return infos;
}

ScanConfig preset(std::string_view name) {
  for (const auto& p : preset_table()) {
    if (p.info.name != name) continue;
    ScanConfig c;
    c.preset = p.info.name;
    c.density_cm3 = 2.5e11;
    c.length_cm = 2.5;
    c.wavelength_nm = 795.0;
    c.ku_mhz = 250.0;
    c.gamma_r_mhz = 3.0;
    c.gamma_deph_mhz = p.gamma_deph_mhz;
    c.gamma_bc_khz = p.gamma_bc_khz;
    c.omega_d_mhz = 2.5;
    c.omega_p_mhz = 0.5;
    c.grid = {0.0, p.span_khz, 61};
    c.sweep = {0.0, p.sweep_stop_mhz, 21};
    c.quad.scheme = QuadratureScheme::adaptive;
    c.quad.tolerance = 1e-6;
    c.slabs.slab_count = 32;
    c.slabs.richardson_check = false;
    c.output_dir = "scan_" + p.info.name;
    if (!p.info.supported) {
      c.warnings.push_back("preset '" + p.info.name +
                           "' is outside the model's validity (buffer gas below 1 Torr: "
                           "atoms cross the beam ballistically); results are indicative only");
    }
    return c;
  }
  throw ConfigError("scan.preset", "unknown preset '" + std::string(name) + "'");
}

}  // namespace lspec
