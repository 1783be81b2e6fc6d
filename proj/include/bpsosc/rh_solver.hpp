#pragma once

#include <string>
#include <vector>

#include "bpsosc/oscillator.hpp"
#include "bpsosc/quadrature.hpp"

namespace bpsosc {

// Nystrom discretisation of the four integral equations on the rays +-Z(gamma), parameterised by
// t' = +-Z(gamma)/s so that the exponential factor becomes e^{-m s}.
class RhSolution {
 public:
  RhSolution(const SimpleOscillator& osc, int max_iter = 200, double tol = 1e-14, const QuadSettings& q = {});

  ComplexMatrix2 at(cplx t) const;
  int iterations() const { return iterations_; }
  double last_update() const { return last_update_; }
  double contraction() const { return contraction_; }
  cplx coupling() const { return eta_; }

 private:
  cplx z_gamma_;
  cplx eta_;
  std::vector<double> s_, w_;
  // boundary values: Psi11, Psi21 on the ray of Z(gamma); Psi12, Psi22 on the opposite ray
  std::vector<cplx> p11_, p12_, p21_, p22_;
  int iterations_ = 0;
  double last_update_ = 0.0;
  double contraction_ = 0.0;
};

struct RayCheck {
  double distance;  // angular distance of t from the nearer ray
  std::string warning;
};

// Rejects t on (or within 1e-10 rad of) the rays +-Z(gamma); warns within 1e-3.
RayCheck check_off_rays(cplx z_gamma, cplx t);

ComplexMatrix2 picard_solve(const SimpleOscillator& osc, cplx t, int max_iter = 200, double tol = 1e-14,
                            const QuadSettings& q = {});

ComplexMatrix2 first_order_psi(const SimpleOscillator& osc, cplx t, const QuadSettings& q = {});

// -(c m / pi) int_0^inf arctan(s t / Z(gamma)) e^{-m s} ds; needs Re(Z(gamma)/t) > 0.
cplx psi_12_symmetrized(const SimpleOscillator& osc, cplx t, const QuadSettings& q = {});

// The symmetrised entry above equals the first-order (1,2) + (2,1) entries at -i t.
inline cplx symmetrization_argument(cplx t) { return -kI * t; }

}  // namespace bpsosc
