#include "bpsosc/specfun.hpp"

#include <array>
#include <cmath>
#include <mutex>


namespace bpsosc {

namespace {

const double kHalfLog2Pi = 0.5 * std::log(kTwoPi);

void check_right_half_plane(cplx z, const char* field) {
  require_finite(z, field);
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
    throw ValidationError("pole at nonpositive integer", field);
  if (z.real() <= 0.0) throw ValidationError("unsupported region Re <= 0", field);
}

const std::array<double, 11>& even_bernoulli() {
  static const std::array<double, 11> table = [] {
    std::array<double, 11> t{};
    for (int k = 0; k <= 10; ++k) t[k] = to_double(bernoulli(2 * k));
    return t;
  }();
  return table;
}

}  // namespace

cplx log_gamma(cplx z) {
  check_right_half_plane(z, "z");
  cplx shift = 0.0;
  while (z.real() < 8.0) {
    shift += std::log(z);
    z += 1.0;
  }
  const auto& b = even_bernoulli();
  cplx inv = 1.0 / z, inv2 = inv * inv, pw = inv, series = 0.0;
  for (int k = 1; k <= 10; ++k) {
    series += b[k] / (2.0 * k * (2.0 * k - 1.0)) * pw;
    pw *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + kHalfLog2Pi + series - shift;
}

cplx digamma(cplx z) {
  check_right_half_plane(z, "z");
  cplx shift = 0.0;
  while (z.real() < 8.0) {
    shift += 1.0 / z;
    z += 1.0;
  }
  const auto& b = even_bernoulli();
  cplx inv2 = 1.0 / (z * z), pw = inv2, series = 0.0;
  for (int k = 1; k <= 10; ++k) {
    series += b[k] / (2.0 * k) * pw;
    pw *= inv2;
  }
  return std::log(z) - 0.5 / z - series - shift;
}

cplx binet_term(cplx z, const QuadSettings& q) {
  check_right_half_plane(z, "z");
  cplx scale = kTwoPi * z;
  return integrate_half_line([&](double s) { return std::atan(s / scale) / std::expm1(s); }, q) / kPi;
}

cplx binet_integral(cplx z, const QuadSettings& q) {
  return (z - 0.5) * std::log(z) - z + kHalfLog2Pi + binet_term(z, q);
}

cplx log_barnes_g(cplx w) {
  check_right_half_plane(w, "w");
  // The integrand is analytic on Re u > -1 (u psi(u) = u psi(u+1) - 1), so the straight path from 1
  // stays clear of the poles of psi.
  auto rate = [](cplx u) { return kHalfLog2Pi + 0.5 - u + u * digamma(u); };
  return integrate_segment(rate, cplx(1.0), w, 64, 2.0);
}

cplx log_lambda(cplx w) {
  require_finite(w, "w");
  if (w == 0.0) throw ValidationError("singular argument w = 0", "w");
  return w + log_gamma(w) - kHalfLog2Pi - (w - 0.5) * std::log(w);
}

cplx lambda_fn(cplx w) { return std::exp(log_lambda(w)); }

cplx log_upsilon(cplx w) {
  require_finite(w, "w");
  if (w == 0.0) throw ValidationError("singular argument w = 0", "w");
  return std::log(-kZetaPrimeMinusOne) + 0.75 * w * w + log_barnes_g(w) - 0.5 * w * std::log(kTwoPi) -
         0.5 * w * w * std::log(w);
}

cplx upsilon_fn(cplx w) { return std::exp(log_upsilon(w)); }

double upsilon_log_constant() { return std::log(-kZetaPrimeMinusOne) + kZetaPrimeMinusOne; }

cplx clog1p(cplx x) {
  if (std::abs(x) < 1e-4) {
    cplx x2 = x * x;
    return x - x2 / 2.0 + x2 * x / 3.0 - x2 * x2 / 4.0 + x2 * x2 * x / 5.0;
  }
  return std::log(1.0 + x);
}

cplx upsilon_remainder(cplx w, const QuadSettings& q) {
  check_right_half_plane(w, "w");
  cplx inv = 1.0 / (kTwoPi * w);
  cplx inv2 = inv * inv;
  return -integrate_half_line([&](double s) { return s * clog1p(s * s * inv2) / std::expm1(s); }, q) /
         (4.0 * kPi * kPi);
}

Rational upsilon_asymptotic_coefficient(int g) {
  if (g < 2 || 2 * g > 64) throw ValidationError("expansion index out of range [2, 32]", "g");
  return bernoulli(2 * g) / Rational(2 * g * (2 * g - 2));
}

cplx upsilon_remainder_beyond(cplx w, int terms, const QuadSettings& q) {
  check_right_half_plane(w, "w");
  if (terms < 0) throw ValidationError("number of subtracted terms must be nonnegative", "terms");
  cplx inv = 1.0 / (kTwoPi * w);
  cplx inv2 = inv * inv;
  // log(1 + u) minus its Taylor polynomial of degree `terms`
  auto log1p_tail = [terms](cplx u) {
    if (std::abs(u) < 0.5) {
      cplx acc = 0.0, p = std::pow(u, terms + 1);
      for (int k = terms + 1; k < terms + 200; ++k, p *= u) {
        cplx term = (k % 2 == 1 ? 1.0 : -1.0) * p / static_cast<double>(k);
        acc += term;
        if (std::abs(term) <= 1e-18 * std::abs(acc)) break;
      }
      return acc;
    }
    cplx acc = std::log(1.0 + u), p = u;
    for (int k = 1; k <= terms; ++k, p *= u) acc -= (k % 2 == 1 ? 1.0 : -1.0) * p / static_cast<double>(k);
    return acc;
  };
  return -integrate_half_line([&](double s) { return s * log1p_tail(s * s * inv2) / std::expm1(s); }, q) /
         (4.0 * kPi * kPi);
}

Rational bernoulli(int n) {
  static constexpr int kMax = 64;
  if (n < 0 || n > kMax) throw ValidationError("Bernoulli index out of range [0, 64]", "n");
  static const std::vector<Rational> table = [] {
    std::vector<Rational> b(kMax + 1);
    b[0] = 1;
    for (int m = 1; m <= kMax; ++m) {
      // sum_{k<=m} C(m+1, k) B_k = 0
      Rational acc = 0;
      BigInt binom = 1;  // C(m+1, 0)
      for (int k = 0; k < m; ++k) {
        acc += Rational(binom) * b[k];
        binom = binom * (m + 1 - k) / (k + 1);
      }
      b[m] = -acc / Rational(m + 1);
    }
    return b;
  }();
  return table[n];
}

const std::vector<BigInt>& polylog_neg_numerator(int n) {
  static constexpr int kMax = 30;
  if (n < 0 || n > kMax) throw ValidationError("polylog order out of range [0, 30]", "n");
  // P_0 = x; P_{n+1} = x[(1 - x) P_n' + (n + 1) P_n].
  static const std::vector<std::vector<BigInt>> table = [] {
    std::vector<std::vector<BigInt>> t(kMax + 1);
    t[0] = {BigInt(0), BigInt(1)};
    for (int n = 0; n < kMax; ++n) {
      const auto& p = t[n];
      std::vector<BigInt> inner(p.size() + 1, BigInt(0));
      for (size_t k = 0; k < p.size(); ++k) {
        inner[k] += (n + 1) * p[k];
        if (k >= 1) {
          inner[k - 1] += k * p[k];
          inner[k] -= k * p[k];
        }
      }
      std::vector<BigInt> next(inner.size() + 1, BigInt(0));
      for (size_t k = 0; k < inner.size(); ++k) next[k + 1] = inner[k];
      while (next.size() > 1 && next.back() == 0) next.pop_back();
      t[n + 1] = next;
    }
    return t;
  }();
  return table[n];
}

cplx polylog_neg(int n, cplx x) {
  require_finite(x, "x");
  if (x == 1.0) throw ValidationError("pole at x = 1", "x");
  const auto& p = polylog_neg_numerator(n);
  cplx num = 0.0;
  for (size_t k = p.size(); k-- > 0;) num = num * x + p[k].convert_to<double>();
  return num / std::pow(1.0 - x, n + 1);
}

}  // namespace bpsosc
