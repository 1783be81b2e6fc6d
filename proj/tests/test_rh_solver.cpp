#include <doctest.h>

#include <cmath>

#include "bpsosc/rh_solver.hpp"

using namespace bpsosc;

namespace {

SimpleOscillator basic(double hbar, int m = 1, std::int64_t p = -1, Rational omega = 1) {
  return SimpleOscillator(m, p, omega, cplx(1, 0), cplx(0, 1), hbar);
}

double slope(const std::vector<double>& h, const std::vector<double>& e) {
  double n = h.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < h.size(); ++i) {
    double x = std::log(h[i]), y = std::log(e[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

const cplx kT = std::polar(0.3, kPi / 4);

}  // namespace

TEST_CASE("trivial coupling gives the identity after one iteration") {
  RhSolution rs(basic(0.1, 1, -1, 0));
  CHECK(rs.iterations() == 1);
  auto p = rs.at(kT);
  CHECK((p - ComplexMatrix2::identity()).max_abs() == 0.0);
  CHECK((first_order_psi(basic(0.1, 1, -1, 0), kT) - ComplexMatrix2::identity()).max_abs() == 0.0);
}

TEST_CASE("Picard solution agrees with the ODE solution") {
  auto osc = basic(0.05);
  CHECK((picard_solve(osc, kT) - fundamental_solution(osc, kT).psi).max_abs() < 1e-6);
  auto osc2 = SimpleOscillator(2, 3, Rational(1, 2), std::polar(1.3, 2.0), cplx(0.4, -0.2), 0.1);
  RhSolution rs(osc2);
  for (double a : {0.3, 1.5, 2.9, -0.3, -1.5, -2.9}) {
    cplx t = std::polar(0.6, std::arg(osc2.z_gamma()) + a);
    CHECK((rs.at(t) - fundamental_solution(osc2, t).psi).max_abs() < 1e-8);
  }
}

TEST_CASE("order in hbar") {
  std::vector<double> hs{0.2, 0.1, 0.05, 0.025}, full, rest, diag, diag11;
  for (double h : hs) {
    auto osc = basic(h);
    auto p = picard_solve(osc, kT);
    auto l = matrix_log(p);
    full.push_back((p - ComplexMatrix2::identity()).max_abs());
    rest.push_back((p - first_order_psi(osc, kT)).max_abs());
    diag.push_back(std::max(std::abs(l.a11), std::abs(l.a22)));
    diag11.push_back(std::abs(p.a11 - 1.0));
  }
  CHECK(slope(hs, full) >= 0.95);
  CHECK(slope(hs, rest) >= 1.9);
  CHECK(slope(hs, diag) >= 1.9);
  CHECK(slope(hs, diag11) >= 1.9);
  // the diagonal of log Psi is genuinely second order, not zero
  CHECK(diag.back() > 1e-8);
}

TEST_CASE("first-order antisymmetry under t -> -t") {
  auto osc = basic(0.1, 3, 2, Rational(3, 2));
  for (cplx t : {kT, cplx(-0.4, 1.1), cplx(0.2, -0.9)}) {
    auto a = first_order_psi(osc, t), b = first_order_psi(osc, -t);
    CHECK(std::abs(a.a12 + b.a21) < 1e-14);
  }
}

TEST_CASE("symmetrised first-order entry") {
  CHECK(psi_12_symmetrized(basic(0.1, 1, -1, 0), cplx(1, 0)) == 0.0);
  auto osc = basic(0.1);
  CHECK(std::abs(psi_12_symmetrized(osc, cplx(1e-6, 0))) < 1e-6);
  for (cplx t : {cplx(1, 0), cplx(0.5, 0.3), cplx(2.0, -1.5)}) {
    auto fo = first_order_psi(osc, symmetrization_argument(t));
    CHECK(std::abs(psi_12_symmetrized(osc, t) - (fo.a12 + fo.a21)) < 1e-13);
  }
  // brute-force trapezoid on [0, 40] with 10^6 intervals at Z/t = 1
  const int n = 1000000;
  double h = 40.0 / n, acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    double s = i * h;
    double f = std::atan(s) * std::exp(-s);
    acc += (i == 0 || i == n) ? 0.5 * f : f;
  }
  double oracle = -osc.coupling() / kPi * acc * h;
  CHECK(std::abs(psi_12_symmetrized(osc, cplx(1, 0)) - oracle) < 1e-11);
  CHECK_THROWS_AS(psi_12_symmetrized(osc, cplx(-1, 0.2)), SectorError);
}

TEST_CASE("jump across the ray of Z(gamma)") {
  auto osc = basic(0.2, 2, -1, 1);
  auto s = stokes_analytic(osc).plus;
  double r = 0.7, eps = 1e-7;
  cplx tp = std::polar(r, eps), tm = std::polar(r, -eps);
  auto pb = fundamental_solution(osc, tp).psi;
  auto pa = fundamental_solution(osc, tm).psi;
  cplx t(r, 0.0);
  // Psi_ccw = Psi_cw E S+ E^{-1}, E = diag(e^{-z_j/t})
  ComplexMatrix2 conj{s.a11, s.a12 * std::exp(-(osc.z1() - osc.z2()) / t), s.a21 * std::exp((osc.z1() - osc.z2()) / t), s.a22};
  CHECK((pb - pa * conj).max_abs() < 1e-6);
  // Picard values track the ODE solution on both sides of the ray
  RhSolution rs(osc);
  auto qb = rs.at(std::polar(r, 5e-2)), qa = rs.at(std::polar(r, -5e-2));
  auto ob = fundamental_solution(osc, std::polar(r, 5e-2)).psi, oa = fundamental_solution(osc, std::polar(r, -5e-2)).psi;
  CHECK((qb - ob).max_abs() < 1e-6);
  CHECK((qa - oa).max_abs() < 1e-6);
}

TEST_CASE("quadrature refinement stability") {
  auto osc = basic(0.2);
  QuadSettings fine{1.0, 64, 40.0};
  CHECK((picard_solve(osc, kT) - picard_solve(osc, kT, 200, 1e-14, fine)).max_abs() < 1e-9);
  CHECK((first_order_psi(osc, kT) - first_order_psi(osc, kT, fine)).max_abs() < 1e-12);
}

TEST_CASE("errors") {
  auto osc = basic(0.1);
  CHECK_THROWS_AS(picard_solve(osc, cplx(0.5, 0)), SectorError);
  CHECK_THROWS_AS(first_order_psi(osc, cplx(-0.5, 0)), SectorError);
  CHECK(!check_off_rays(cplx(1, 0), std::polar(1.0, 5e-4)).warning.empty());
  CHECK_THROWS_AS(RhSolution(basic(3.0)), DivergenceError);
}
