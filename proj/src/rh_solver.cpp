#include "bpsosc/rh_solver.hpp"

#include <algorithm>
#include <cmath>

namespace bpsosc {

namespace {

// Boundary values behave like powers of s near s = 0 (t -> infinity), so the first panel is graded.
constexpr int kGradingLevels = 12;

}  // namespace

RayCheck check_off_rays(cplx z_gamma, cplx t) {
  require_finite(t, "t");
  if (std::abs(t) == 0.0) throw ValidationError("t = 0", "t");
  double rel = std::abs(std::remainder(std::arg(t) - std::arg(z_gamma), kTwoPi));
  double dist = std::min(rel, kPi - rel);
  if (dist < 1e-10) throw SectorError("t lies on a ray of Z(gamma)", "t");
  RayCheck r{dist, {}};
  if (dist < 1e-3) r.warning = "t is within 1e-3 rad of a ray of Z(gamma); quadrature accuracy degrades";
  return r;
}

RhSolution::RhSolution(const SimpleOscillator& osc, int max_iter, double tol, const QuadSettings& q)
    : z_gamma_(osc.z_gamma()) {
  // eta = S+_12 / (2 pi i)
  eta_ = stokes_analytic(osc).plus.a12 / (kTwoPi * kI);
  const Rule& rule = graded_half_line_rule(q, kGradingLevels);
  double m = osc.m();
  size_t n = rule.nodes.size();
  for (size_t k = 0; k < n; ++k) {
    s_.push_back(rule.nodes[k] / m);
    w_.push_back(rule.weights[k] * std::exp(-rule.nodes[k]) / m);
  }
  std::vector<double> kernel(n * n);
  double norm = 0.0;
  for (size_t k = 0; k < n; ++k) {
    double row = 0.0;
    for (size_t l = 0; l < n; ++l) {
      kernel[k * n + l] = w_[l] / (s_[k] + s_[l]);
      row += kernel[k * n + l];
    }
    norm = std::max(norm, row);
  }
  contraction_ = std::abs(eta_) * norm;
  if (!(contraction_ < 0.9))
    throw DivergenceError("Picard map is not a contraction: |eta| K_op = " + std::to_string(contraction_) + " >= 0.9",
                          "hbar");
  p11_.assign(n, 1.0);
  p22_.assign(n, 1.0);
  p12_.assign(n, 0.0);
  p21_.assign(n, 0.0);
  auto apply = [&](const std::vector<cplx>& x, size_t k) {
    cplx acc = 0.0;
    for (size_t l = 0; l < n; ++l) acc += kernel[k * n + l] * x[l];
    return acc;
  };
  for (iterations_ = 1; iterations_ <= max_iter; ++iterations_) {
    std::vector<cplx> n11(n), n12(n), n21(n), n22(n);
    for (size_t k = 0; k < n; ++k) {
      n11[k] = 1.0 + eta_ * apply(p12_, k);
      n12[k] = -eta_ * apply(p11_, k);
      n21[k] = eta_ * apply(p22_, k);
      n22[k] = 1.0 - eta_ * apply(p21_, k);
    }
    double upd = 0.0;
    for (size_t k = 0; k < n; ++k)
      upd = std::max({upd, std::abs(n11[k] - p11_[k]), std::abs(n12[k] - p12_[k]), std::abs(n21[k] - p21_[k]),
                      std::abs(n22[k] - p22_[k])});
    p11_.swap(n11);
    p12_.swap(n12);
    p21_.swap(n21);
    p22_.swap(n22);
    last_update_ = upd;
    if (upd < tol) return;
  }
  throw DivergenceError("Picard iteration did not reach tolerance; last update " + std::to_string(last_update_),
                        "max_iter");
}

ComplexMatrix2 RhSolution::at(cplx t) const {
  check_off_rays(z_gamma_, t);
  cplx w = z_gamma_ / t;
  cplx a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;
  for (size_t l = 0; l < s_.size(); ++l) {
    cplx plus = w_[l] / (w + s_[l]), minus = w_[l] / (w - s_[l]);
    a11 += plus * p12_[l];
    a12 += minus * p11_[l];
    a21 += plus * p22_[l];
    a22 += minus * p21_[l];
  }
  return {1.0 + eta_ * a11, eta_ * a12, eta_ * a21, 1.0 + eta_ * a22};
}

ComplexMatrix2 picard_solve(const SimpleOscillator& osc, cplx t, int max_iter, double tol, const QuadSettings& q) {
  check_off_rays(osc.z_gamma(), t);
  return RhSolution(osc, max_iter, tol, q).at(t);
}

ComplexMatrix2 first_order_psi(const SimpleOscillator& osc, cplx t, const QuadSettings& q) {
  check_off_rays(osc.z_gamma(), t);
  cplx eta = osc.coupling() / (kTwoPi * kI);
  cplx w = osc.z_gamma() / t;
  double m = osc.m();
  cplx i12 = integrate_exp([&](double s) { return 1.0 / (w - s); }, m, q);
  cplx i21 = integrate_exp([&](double s) { return 1.0 / (w + s); }, m, q);
  return {1.0, eta * i12, eta * i21, 1.0};
}

cplx psi_12_symmetrized(const SimpleOscillator& osc, cplx t, const QuadSettings& q) {
  require_finite(t, "t");
  cplx w = osc.z_gamma() / t;
  if (!(w.real() > 0.0)) throw SectorError("needs Re(Z(gamma)/t) > 0", "t");
  double m = osc.m();
  cplx integral = integrate_exp([&](double s) { return std::atan(s / w); }, m, q);
  return -osc.coupling() * m / kPi * integral;
}

}  // namespace bpsosc
