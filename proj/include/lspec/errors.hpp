#pragma once

#include <stdexcept>
#include <string>

namespace lspec {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Steady-state Liouvillian (with trace row) is rank-deficient.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// Closed forms whose shared denominator 2*gamma_bc*Delta^2 + gamma*|Omega_d|^2
/// (or the width denominator) vanishes.
class DegenerateRates : public Error {
 public:
  using Error::Error;
};

class NoSignChange : public Error {
 public:
  using Error::Error;
};

class QuadratureDivergence : public Error {
 public:
  using Error::Error;
};

class ZeroBackground : public Error {
 public:
  using Error::Error;
};

class DegenerateSpectrum : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed CSV or config content; carries the 1-based row (0 if unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row)
      : Error(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class SchemaMismatch : public Error {
 public:
  using Error::Error;
};

/// Configuration validation failure; `field` is the dotted key, e.g. "rates.gamma_bc_khz".
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace lspec
