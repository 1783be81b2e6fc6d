#pragma once

#include <vector>

#include "bpsosc/common.hpp"
#include "bpsosc/quadrature.hpp"

namespace bpsosc {

// zeta'(-1)
inline constexpr double kZetaPrimeMinusOne = -0.16542114370045092921;

cplx log_gamma(cplx z);
cplx digamma(cplx z);

// Integral part of Binet's second formula: (1/pi) int_0^inf arctan(s/(2 pi z)) / (e^s - 1) ds.
// This is exactly log Lambda(z).
cplx binet_term(cplx z, const QuadSettings& q = {});
// Right-hand side of Binet's formula for log Gamma(z).
cplx binet_integral(cplx z, const QuadSettings& q = {});

// log G(w + 1), by integrating the derivative identity from w = 1.
cplx log_barnes_g(cplx w);

cplx log_lambda(cplx w);
cplx lambda_fn(cplx w);
cplx log_upsilon(cplx w);
cplx upsilon_fn(cplx w);

// log Upsilon(w) = log(-zeta'(-1)) + zeta'(-1) - log(w)/12 + upsilon_remainder(w); the remainder is
// evaluated by a cancellation-free integral and decays like w^-2.
double upsilon_log_constant();
cplx upsilon_remainder(cplx w, const QuadSettings& q = {});
// Coefficient of w^{2-2g} in the large-w expansion of the remainder: B_{2g} / (2g (2g-2)).
Rational upsilon_asymptotic_coefficient(int g);
// The remainder minus its first `terms` expansion terms (g = 2 .. terms + 1), without cancellation.
cplx upsilon_remainder_beyond(cplx w, int terms, const QuadSettings& q = {});

Rational bernoulli(int n);

// Li_{-n}(x) = P_n(x) / (1 - x)^{n+1}; numerator coefficients (Eulerian numbers shifted by x).
const std::vector<BigInt>& polylog_neg_numerator(int n);
cplx polylog_neg(int n, cplx x);

cplx clog1p(cplx x);

}  // namespace bpsosc
