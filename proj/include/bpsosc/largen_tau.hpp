#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "bpsosc/bps_core.hpp"
#include "bpsosc/quadrature.hpp"

namespace bpsosc {

// Active classes with central charge in the open half-plane around the ray (Re(Z conj(ray)) > 0).
// Classes on the boundary line are rejected; coupled structures are rejected.
struct FamilyMember {
  Charge gamma;
  cplx z;
  double omega;
};
std::vector<FamilyMember> half_plane_family(const BpsStructure& s, cplx ray);

// Options shared by the limit sums. The half-plane ray defaults to the direction of t.
struct LimitOptions {
  std::optional<cplx> ray;
  QuadSettings quad;
};

// Log of the M-truncated oscillator product for basis vector j, with the geometric sum over
// frequencies resummed inside the integral: sum_i <b_j,g_i> Omega_i (log Lambda-integral - tail_M).
cplx log_partial_sum_psi(const BpsStructure& s, int j, cplx t, double hbar, int M, const LimitOptions& o = {});
cplx partial_sum_psi(const BpsStructure& s, int j, cplx t, double hbar, int M, const LimitOptions& o = {});
// Same sum evaluated frequency by frequency through the first-order RH entries.
cplx log_partial_sum_psi_direct(const BpsStructure& s, int j, cplx t, double hbar, int M, const LimitOptions& o = {});

cplx log_lambda_product_target(const BpsStructure& s, int j, cplx t, const LimitOptions& o = {});
cplx lambda_product_target(const BpsStructure& s, int j, cplx t, const LimitOptions& o = {});

// (1/pi) int_0^inf arctan(s/w) e^{-(M+1)s} / (1 - e^{-s}) ds
cplx arctan_tail(cplx w, int M, const QuadSettings& q = {});

struct LimitReport {
  std::vector<int> truncations;
  std::vector<cplx> partials;  // log values (derivatives for tau_limit)
  int M = 0;                   // largest truncation
  cplx partial;
  cplx target;
  double abs_error = 0.0;
  double fitted_order = 0.0;   // minus the log-log slope of |partial - target| against M
  cplx extrapolated;           // polynomial extrapolation in 1/M through orders 1 and 2
  double extrapolated_error = 0.0;
};

// Needs at least 4 distinct truncations in increasing order.
LimitReport limit_report(const std::vector<int>& Ms, const std::vector<cplx>& partials, cplx target);

LimitReport psi_limit(const BpsStructure& s, int j, cplx t, double hbar, const std::vector<int>& Ms,
                      const LimitOptions& o = {});

// Truncated frequency sums of (1/pi) int arctan(s/(2 pi z)) e^{-m s} ds against Binet's integral term.
LimitReport binet_bridge(cplx z, const std::vector<int>& Ms, const QuadSettings& q = {});

// log tau^(m)(i t) = (Omega/2pi) hbar int_0^inf s log(s^2 + (Z/t)^2) e^{-m s} ds
cplx log_tau_m(double omega, cplx z, int m, cplx t, double hbar, const QuadSettings& q = {});

// (1/hbar) sum_{m<=M} sum_i log tau^(m),i at the argument t/(2 pi), resummed over m.
cplx log_partial_sum_tau(const BpsStructure& s, cplx t, double hbar, int M, const LimitOptions& o = {});
cplx partial_sum_tau(const BpsStructure& s, cplx t, double hbar, int M, const LimitOptions& o = {});
// One class of the sum above; M = kAllFrequencies sums every frequency.
inline constexpr int kAllFrequencies = 0;
cplx log_tau_frequency_sum(double omega, cplx z, cplx t, int M, const QuadSettings& q = {});
// As log_tau_frequency_sum with log(s^2 + W^2) replaced by log(1 + s^2/W^2); decays like (t/Z)^2.
cplx tau_frequency_remainder(double omega, cplx z, cplx t, int M, const QuadSettings& q = {});
cplx log_partial_sum_tau_direct(const BpsStructure& s, cplx t, double hbar, int M, const LimitOptions& o = {});

// Central difference with the (h, h/2, h/4) consistency check; throws DivergenceError when the
// smaller steps disagree more than the larger ones (cancellation).
cplx central_difference(const std::function<cplx(double)>& f, double step);

// d/dZ(gamma) of log_partial_sum_tau, treating Z(gamma) as a free coordinate; h is relative.
cplx tau_gradient(const BpsStructure& s, const Charge& gamma, cplx t, double hbar, int M, double h = 1e-4,
                  const LimitOptions& o = {});
// Omega(gamma) d/dZ log Upsilon(Z(gamma)/t).
cplx upsilon_gradient_target(const BpsStructure& s, const Charge& gamma, cplx t, double h = 1e-4);

LimitReport tau_limit(const BpsStructure& s, const Charge& gamma, cplx t, double hbar, const std::vector<int>& Ms,
                      double h = 1e-4, const LimitOptions& o = {});

struct TauResidual {
  std::vector<cplx> lhs;       // d/dt log v^j
  std::vector<cplx> rhs;       // sum_p <b_j, b_p> d/dZ(b_p) log tau
  std::vector<double> residual;
};

// Z(b_p) are treated as independent coordinates; all derivatives by central differences.
TauResidual tau_equation_residual(const BpsStructure& s, cplx t, double hbar, int M, double h = 1e-4,
                                  const LimitOptions& o = {});

}  // namespace bpsosc
