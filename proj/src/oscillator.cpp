#include "bpsosc/oscillator.hpp"

#include <algorithm>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "bpsosc/specfun.hpp"

namespace bpsosc {

namespace odeint = boost::numeric::odeint;

ComplexMatrix2 ComplexMatrix2::inverse() const {
  cplx d = det();
  if (std::abs(d) == 0.0) throw DivergenceError("singular 2x2 matrix", "matrix");
  return {a22 / d, -a12 / d, -a21 / d, a11 / d};
}

double ComplexMatrix2::max_abs() const {
  return std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22)});
}

ComplexMatrix2 operator*(const ComplexMatrix2& x, const ComplexMatrix2& y) {
  return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22, x.a21 * y.a11 + x.a22 * y.a21,
          x.a21 * y.a12 + x.a22 * y.a22};
}

ComplexMatrix2 operator+(const ComplexMatrix2& x, const ComplexMatrix2& y) {
  return {x.a11 + y.a11, x.a12 + y.a12, x.a21 + y.a21, x.a22 + y.a22};
}

ComplexMatrix2 operator-(const ComplexMatrix2& x, const ComplexMatrix2& y) {
  return {x.a11 - y.a11, x.a12 - y.a12, x.a21 - y.a21, x.a22 - y.a22};
}

ComplexMatrix2 operator*(cplx s, const ComplexMatrix2& x) { return {s * x.a11, s * x.a12, s * x.a21, s * x.a22}; }

ComplexMatrix2 matrix_log(const ComplexMatrix2& x) {
  ComplexMatrix2 a = x - ComplexMatrix2::identity();
  if (a.max_abs() >= 0.45) throw ValidationError("matrix logarithm needs a matrix close to the identity", "psi");
  ComplexMatrix2 sum = ComplexMatrix2::zero(), power = a;
  for (int k = 1; k < 400; ++k) {
    sum = sum + cplx((k % 2 ? 1.0 : -1.0) / k) * power;
    if (power.max_abs() / k < 1e-18) break;
    power = power * a;
  }
  return sum;
}

SimpleOscillator::SimpleOscillator(int m, std::int64_t pairing, Rational omega, cplx z_gamma, cplx z_beta, double hbar)
    : m_(m), pairing_(pairing), omega_(std::move(omega)), z_gamma_(z_gamma), z_beta_(z_beta), hbar_(hbar) {
  if (m_ < 1) throw ValidationError("frequency m must be a positive integer", "oscillator.m");
  if (pairing_ == 0) throw ValidationError("oscillator needs <gamma, beta> != 0", "oscillator.pairing");
  require_finite(z_gamma_, "oscillator.z_gamma");
  require_finite(z_beta_, "oscillator.z_beta");
  if (std::abs(z_gamma_) == 0.0) throw ValidationError("Z(gamma) = 0 gives z1 = z2", "oscillator.z_gamma");
  if (!(hbar_ > 0.0) || !std::isfinite(hbar_)) throw ValidationError("hbar must be positive", "hbar");
}

SimpleOscillator SimpleOscillator::from_structure(const BpsStructure& s, const Charge& gamma, const Charge& beta, int m,
                                                  double hbar) {
  s.check_charge(gamma, "oscillator.gamma");
  s.check_charge(beta, "oscillator.beta");
  return SimpleOscillator(m, bpsosc::pairing(s.form(), gamma, beta), s.omega(gamma), s.central_charge(gamma),
                          s.central_charge(beta), hbar);
}

double SimpleOscillator::coupling() const {
  double sign = ((m_ * pairing_) % 2 == 0) ? 1.0 : -1.0;
  return sign * static_cast<double>(pairing_) * hbar_ * to_double(omega_);
}

SimpleOscillator SimpleOscillator::with_hbar(double hbar) const {
  return SimpleOscillator(m_, pairing_, omega_, z_gamma_, z_beta_, hbar);
}

MeromorphicConnection build_connection(const SimpleOscillator& osc) {
  MeromorphicConnection c;
  c.size = 2;
  c.u_diag = {osc.z1(), osc.z2()};
  double v12 = osc.coupling() / kTwoPi;
  c.v = {{0.0, v12}, {-v12, 0.0}};
  return c;
}

ConfluentParams confluent_params(const SimpleOscillator& osc) {
  return {osc.z1(), osc.z2(), -osc.coupling() / kTwoPi};
}

ConfluentParams solved_confluent_params(const SimpleOscillator& osc) {
  ConfluentParams p = confluent_params(osc);
  return {-p.z1, -p.z2, kI * p.mu};
}

cplx confluent_residual(const ConfluentParams& p, cplx z, cplx u, cplx du, cplx d2u) {
  return d2u + (1.0 / z - p.z1 - p.z2) * du + (p.mu * p.mu / (z * z) - p.z1 / z + p.z1 * p.z2) * u;
}

cplx stokes_entry(cplx coupling) { return 2.0 * kI * std::sinh(-coupling / 2.0); }

namespace {

StokesPair unipotent_pair(cplx upper) {
  StokesPair s;
  s.plus = {1.0, upper, 0.0, 1.0};
  s.minus = {1.0, 0.0, -upper, 1.0};
  return s;
}

// Coefficient matrix W = -i v of the ODE dY/dt = (U/t^2 - W/t) Y.
cplx w12(const SimpleOscillator& osc) { return -kI * osc.coupling() / kTwoPi; }

}  // namespace

StokesPair stokes_analytic(const SimpleOscillator& osc) { return unipotent_pair(stokes_entry(kI * osc.coupling())); }

StokesPair stokes_analytic_unrescaled(int m, std::int64_t pairing, const Rational& omega) {
  double sign = ((m * pairing) % 2 == 0) ? 1.0 : -1.0;
  return unipotent_pair(stokes_entry(sign * static_cast<double>(pairing) * to_double(omega)));
}

cplx gauss_2f1(cplx a, cplx b, cplx c, cplx z) {
  for (cplx x : {a, b, c, z}) require_finite(x, "2F1 argument");
  if (z == 1.0) {
    cplx s = c - a - b;
    if (!(s.real() > 0.0)) throw ValidationError("Gauss value needs Re(c - a - b) > 0", "2F1.c");
    if (a == 0.0 || b == 0.0) return 1.0;
    return std::exp(log_gamma(c) + log_gamma(s) - log_gamma(c - a) - log_gamma(c - b));
  }
  if (std::abs(z) > 0.9) throw ValidationError("series path needs |z| <= 0.9", "2F1.z");
  cplx term = 1.0, sum = 1.0;
  for (int n = 0; n < 100000; ++n) {
    term *= (a + double(n)) * (b + double(n)) / ((c + double(n)) * double(n + 1)) * z;
    sum += term;
    if (std::abs(term) <= 1e-16 * std::abs(sum)) return sum;
  }
  throw DivergenceError("2F1 series did not converge", "2F1");
}

ComplexMatrix2 stokes_via_hypergeometric(const SimpleOscillator& osc) {
  cplx w = w12(osc);
  cplx a = kI * w;
  cplx upper = kTwoPi * kI * w * gauss_2f1(-a, a, 1.0, 1.0);
  return {1.0, upper, 0.0, 1.0};
}

std::vector<ComplexMatrix2> asymptotic_series(const SimpleOscillator& osc, int k) {
  cplx w = w12(osc);
  cplx delta = osc.z1() - osc.z2();
  std::vector<ComplexMatrix2> out{ComplexMatrix2::identity()};
  for (int n = 0; n < k; ++n) {
    const ComplexMatrix2& p = out.back();
    // (n + W) Psi_n
    cplx r12 = double(n) * p.a12 + w * p.a22;
    cplx r21 = double(n) * p.a21 - w * p.a11;
    ComplexMatrix2 next;
    next.a12 = r12 / delta;
    next.a21 = -r21 / delta;
    next.a11 = -(w * next.a21) / double(n + 1);
    next.a22 = (w * next.a12) / double(n + 1);
    out.push_back(next);
  }
  return out;
}

ComplexMatrix2 psi_derivative(const SimpleOscillator& osc, cplx t, const ComplexMatrix2& psi) {
  cplx w = w12(osc);
  cplx delta = osc.z1() - osc.z2();
  cplx t2 = t * t;
  ComplexMatrix2 comm{0.0, delta * psi.a12 / t2, -delta * psi.a21 / t2, 0.0};
  ComplexMatrix2 wpsi{w * psi.a21, w * psi.a22, -w * psi.a11, -w * psi.a12};
  return comm - (1.0 / t) * wpsi;
}

namespace {

using State = std::array<cplx, 2>;

struct ColumnSystem {
  cplx w, delta;
  int column;
  // t(x) = scale * e^{i x} (arc) or x * e^{i angle} (ray); dt/dx given by the path.
  bool arc;
  double fixed;  // radius on arcs, angle on rays

  void operator()(const State& y, State& dydx, double x) const {
    cplx t = arc ? std::polar(fixed, x) : std::polar(x, fixed);
    cplx dt = arc ? kI * t : std::polar(1.0, fixed);
    cplx inv = 1.0 / t;
    // ((U - u_j)/t^2 - W/t) y
    cplx d1 = column == 0 ? 0.0 : delta;
    cplx d2 = column == 0 ? -delta : 0.0;
    cplx f1 = d1 * inv * inv * y[0] - inv * (w * y[1]);
    cplx f2 = d2 * inv * inv * y[1] + inv * (w * y[0]);
    dydx[0] = f1 * dt;
    dydx[1] = f2 * dt;
  }
};

void integrate_path(ColumnSystem sys, State& y, double from, double to, const OdeSettings& ode) {
  if (from == to) return;
  auto stepper = odeint::make_controlled(ode.atol, ode.rtol, odeint::runge_kutta_fehlberg78<State>());
  double span = to - from;
  double dt0 = span / 64.0;
  try {
    odeint::integrate_adaptive(stepper, sys, y, from, to, dt0);
  } catch (const std::exception& e) {
    throw DivergenceError(std::string("adaptive integration failed (step-size underflow): ") + e.what(), "ode");
  }
  for (const cplx& v : y)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DivergenceError("non-finite ODE state", "ode");
}

// Column j of Psi at t = r exp(i (arg Z(gamma) + rel)), for the sector on the given side of the ray.
State canonical_column(const SimpleOscillator& osc, int j, bool ccw, double r, double rel, const OdeSettings& ode,
                       const std::vector<ComplexMatrix2>& series) {
  const double q = kPi / 4;
  double start;
  if (j == 0)
    start = ccw ? std::min(rel, q) : std::max(rel, -q);
  else
    start = ccw ? std::max(rel, 3 * q) : std::min(rel, -3 * q);
  cplx delta = osc.z1() - osc.z2();
  double base = std::arg(delta);

  int k = ode.series_order;
  const ComplexMatrix2& tail = series[k + 1];
  double tail_norm = j == 0 ? std::max(std::abs(tail.a11), std::abs(tail.a21)) : std::max(std::abs(tail.a12), std::abs(tail.a22));
  double rho0 = r;
  if (tail_norm > 0.0) rho0 = std::min(r, std::pow(ode.series_tol / tail_norm, 1.0 / (k + 1)));

  cplx t0 = std::polar(rho0, base + start);
  State y{0.0, 0.0};
  cplx pw = 1.0;
  for (int n = 0; n <= k; ++n) {
    y[0] += (j == 0 ? series[n].a11 : series[n].a12) * pw;
    y[1] += (j == 0 ? series[n].a21 : series[n].a22) * pw;
    pw *= t0;
  }
  cplx w = w12(osc);
  integrate_path(ColumnSystem{w, delta, j, false, base + start}, y, rho0, r, ode);
  integrate_path(ColumnSystem{w, delta, j, true, r}, y, base + start, base + rel, ode);
  return y;
}

ComplexMatrix2 canonical_psi(const SimpleOscillator& osc, bool ccw, double r, double rel, const OdeSettings& ode) {
  auto series = asymptotic_series(osc, ode.series_order + 1);
  State c1 = canonical_column(osc, 0, ccw, r, rel, ode, series);
  State c2 = canonical_column(osc, 1, ccw, r, rel, ode, series);
  return {c1[0], c2[0], c1[1], c2[1]};
}

double relative_angle(cplx t, cplx delta) { return std::remainder(std::arg(t) - std::arg(delta), kTwoPi); }

}  // namespace

FundamentalSolution fundamental_solution(const SimpleOscillator& osc, cplx t, const OdeSettings& ode) {
  require_finite(t, "t");
  if (std::abs(t) == 0.0) throw ValidationError("t = 0 is the irregular singularity", "t");
  cplx delta = osc.z1() - osc.z2();
  double rel = relative_angle(t, delta);
  if (std::abs(rel) < 1e-10 || kPi - std::abs(rel) < 1e-10)
    throw SectorError("t lies on a Stokes ray of Z(gamma); perturb its argument", "t");
  FundamentalSolution fs;
  fs.counterclockwise = rel > 0;
  fs.psi = canonical_psi(osc, fs.counterclockwise, std::abs(t), rel, ode);
  cplx e1 = std::exp(-osc.z1() / t), e2 = std::exp(-osc.z2() / t);
  fs.y = {fs.psi.a11 * e1, fs.psi.a12 * e2, fs.psi.a21 * e1, fs.psi.a22 * e2};
  fs.det_error = std::abs(fs.psi.det() - 1.0);
  return fs;
}

StokesPair stokes_numeric(const SimpleOscillator& osc, const OdeSettings& ode) {
  cplx delta = osc.z1() - osc.z2();
  double r = std::abs(delta);
  StokesPair out;
  {
    // Y_ccw = Y_cw S+ on the ray of Z(gamma), where delta / t = 1.
    ComplexMatrix2 m = canonical_psi(osc, false, r, 0.0, ode).inverse() * canonical_psi(osc, true, r, 0.0, ode);
    double e = std::exp(1.0);
    out.plus = {m.a11, m.a12 * e, m.a21 / e, m.a22};
  }
  {
    // Y_cw = Y_ccw S- on the opposite ray, where delta / t = -1.
    ComplexMatrix2 m = canonical_psi(osc, true, r, kPi, ode).inverse() * canonical_psi(osc, false, r, -kPi, ode);
    double e = std::exp(-1.0);
    out.minus = {m.a11, m.a12 * e, m.a21 / e, m.a22};
  }
  out.accuracy = std::max({std::abs(out.plus.a11 - 1.0), std::abs(out.plus.a22 - 1.0), std::abs(out.plus.a21),
                           std::abs(out.minus.a11 - 1.0), std::abs(out.minus.a22 - 1.0), std::abs(out.minus.a12)});
  return out;
}

}  // namespace bpsosc
