#include "bpsosc/common.hpp"

#include <cmath>
#include <regex>

namespace bpsosc {

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational parse_rational(const std::string& text, const std::string& field) {
  static const std::regex pattern(R"(\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) throw ValidationError("expected rational \"p/q\", got \"" + text + "\"", field);
  BigInt num(m[1].str());
  BigInt den = m[2].matched ? BigInt(m[2].str()) : BigInt(1);
  if (den == 0) throw ValidationError("zero denominator", field);
  return Rational(num, den);
}

std::string rational_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

void require_finite(cplx z, const std::string& field) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw ValidationError("non-finite complex value", field);
}

cplx extrapolate_to_zero(const std::vector<double>& x, std::vector<cplx> y) {
  if (x.empty() || x.size() != y.size()) throw ValidationError("extrapolation needs matching nonempty samples");
  for (size_t k = 1; k < x.size(); ++k)
    for (size_t i = x.size() - 1; i >= k; --i) y[i] = (x[i] * y[i - 1] - x[i - k] * y[i]) / (x[i] - x[i - k]);
  return y.back();
}

}  // namespace bpsosc
