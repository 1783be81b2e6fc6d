#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace bpsosc {

using cplx = std::complex<double>;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;
inline const cplx kI{0.0, 1.0};

inline constexpr const char* kVersion = "0.1.0";

// Base of all library errors. The field path names the offending input
// (scenario key, argument name) so the CLI can report it.
class Error : public std::runtime_error {
 public:
  Error(const std::string& what, std::string field = {})
      : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }
  virtual int exit_code() const { return 1; }

 private:
  std::string field_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 2; }
};

class DivergenceError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 3; }
};

class SectorError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 4; }
};

double to_double(const Rational& q);
Rational parse_rational(const std::string& text, const std::string& field = {});
std::string rational_string(const Rational& q);
void require_finite(cplx z, const std::string& field);

// Value at x = 0 of the polynomial through (x_k, y_k) (Neville).
cplx extrapolate_to_zero(const std::vector<double>& x, std::vector<cplx> y);

}  // namespace bpsosc
