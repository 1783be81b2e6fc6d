#pragma once

#include <array>

#include "bpsosc/bps_core.hpp"
#include "bpsosc/frobenius.hpp"

namespace bpsosc {

struct ComplexMatrix2 {
  cplx a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;

  static ComplexMatrix2 identity() { return {}; }
  static ComplexMatrix2 zero() { return {0.0, 0.0, 0.0, 0.0}; }
  cplx det() const { return a11 * a22 - a12 * a21; }
  ComplexMatrix2 inverse() const;
  double max_abs() const;
  friend ComplexMatrix2 operator*(const ComplexMatrix2& x, const ComplexMatrix2& y);
  friend ComplexMatrix2 operator+(const ComplexMatrix2& x, const ComplexMatrix2& y);
  friend ComplexMatrix2 operator-(const ComplexMatrix2& x, const ComplexMatrix2& y);
  friend ComplexMatrix2 operator*(cplx s, const ComplexMatrix2& x);
};

// Principal matrix logarithm of a 2x2 matrix close to the identity.
ComplexMatrix2 matrix_log(const ComplexMatrix2& x);

class SimpleOscillator {
 public:
  SimpleOscillator(int m, std::int64_t pairing, Rational omega, cplx z_gamma, cplx z_beta, double hbar);
  // Block (m; gamma, beta) of a BPS structure; Omega taken from the spectrum at gamma.
  static SimpleOscillator from_structure(const BpsStructure& s, const Charge& gamma, const Charge& beta, int m,
                                         double hbar);

  int m() const { return m_; }
  std::int64_t pairing() const { return pairing_; }
  const Rational& omega() const { return omega_; }
  double hbar() const { return hbar_; }
  cplx z_gamma() const { return z_gamma_; }
  cplx z_beta() const { return z_beta_; }
  cplx z1() const { return static_cast<double>(m_) * (z_gamma_ + z_beta_); }
  cplx z2() const { return static_cast<double>(m_) * z_beta_; }
  // (-1)^{m <gamma,beta>} <gamma,beta> hbar Omega
  double coupling() const;
  SimpleOscillator with_hbar(double hbar) const;

 private:
  int m_;
  std::int64_t pairing_;
  Rational omega_;
  cplx z_gamma_, z_beta_;
  double hbar_;
};

MeromorphicConnection build_connection(const SimpleOscillator& osc);

struct ConfluentParams {
  cplx z1, z2, mu;
};

ConfluentParams confluent_params(const SimpleOscillator& osc);
// Parameters of the same equation satisfied by u(z) = Y11(1/z) for the ODE solved here,
// dY/dt = (U/t^2 - W/t) Y with W = -i v: (z1, z2, mu) -> (-z1, -z2, i mu).
ConfluentParams solved_confluent_params(const SimpleOscillator& osc);
// u'' + (1/z - z1 - z2) u' + (mu^2/z^2 - z1/z + z1 z2) u
cplx confluent_residual(const ConfluentParams& p, cplx z, cplx u, cplx du, cplx d2u);

struct StokesPair {
  ComplexMatrix2 plus, minus;
  double accuracy = 0.0;  // largest deviation from unipotent triangular shape
};

// 2 i sinh(-x/2) for the coupling x.
cplx stokes_entry(cplx coupling);
StokesPair stokes_analytic(const SimpleOscillator& osc);
// Convention with i hbar replaced by 1.
StokesPair stokes_analytic_unrescaled(int m, std::int64_t pairing, const Rational& omega);

cplx gauss_2f1(cplx a, cplx b, cplx c, cplx z);
ComplexMatrix2 stokes_via_hypergeometric(const SimpleOscillator& osc);

struct OdeSettings {
  double rtol = 1e-10;
  double atol = 1e-13;
  int series_order = 6;
  double series_tol = 1e-12;
};

// Coefficients Psi_0 = I, Psi_1, ..., Psi_k of the formal solution at t = 0.
std::vector<ComplexMatrix2> asymptotic_series(const SimpleOscillator& osc, int k);

struct FundamentalSolution {
  ComplexMatrix2 y, psi;
  double det_error = 0.0;
  bool counterclockwise = false;  // sector on the larger-argument side of the ray of Z(gamma)
};

FundamentalSolution fundamental_solution(const SimpleOscillator& osc, cplx t, const OdeSettings& ode = {});
// dPsi/dt from the ODE at a point where Psi is known.
ComplexMatrix2 psi_derivative(const SimpleOscillator& osc, cplx t, const ComplexMatrix2& psi);

StokesPair stokes_numeric(const SimpleOscillator& osc, const OdeSettings& ode = {});

}  // namespace bpsosc
