#include "bpsosc/largen_tau.hpp"

#include <cmath>

#include "bpsosc/rh_solver.hpp"
#include "bpsosc/specfun.hpp"

namespace bpsosc {

namespace {

std::int64_t basis_pairing(const SkewForm& f, int j, const Charge& g) {
  std::int64_t acc = 0;
  for (int k = 0; k < f.rank(); ++k) acc += f(j, k) * g[k];
  return acc;
}

cplx charge_value(const Charge& g, const std::vector<cplx>& z) {
  cplx acc = 0.0;
  for (size_t k = 0; k < g.size(); ++k)
    if (g[k] != 0) acc += static_cast<double>(g[k]) * z[k];
  return acc;
}

void check_index(const BpsStructure& s, int j) {
  if (j < 0 || j >= s.rank()) throw ValidationError("basis index out of range", "j");
}

void check_hbar(double hbar) {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ValidationError("hbar must be positive", "hbar");
}

void check_truncation(int M) {
  if (M < 1) throw ValidationError("truncation must be at least 1", "M");
}

std::vector<FamilyMember> family_for(const BpsStructure& s, cplx t, const LimitOptions& o) {
  require_finite(t, "t");
  if (t == 0.0) throw ValidationError("t must be nonzero", "t");
  return half_plane_family(s, o.ray ? *o.ray : t / std::abs(t));
}

cplx sector_ratio(const FamilyMember& g, cplx z, cplx t) {
  cplx w = z / t;
  if (!(w.real() > 0.0)) throw SectorError("needs Re(Z/t) > 0 for class " + to_string(g.gamma), "t");
  return w;
}

// <b_j, g> Omega (log Lambda integral - tail) for one class.
cplx psi_term(const FamilyMember& g, cplx z, cplx t, int M, const QuadSettings& q) {
  cplx w = sector_ratio(g, z, t);
  return g.omega * (binet_term(w, q) - arctan_tail(kTwoPi * w, M, q));
}

cplx log_psi_from(const std::vector<FamilyMember>& fam, const SkewForm& f, int j, const std::vector<cplx>& zv, cplx t,
                  int M, const QuadSettings& q) {
  cplx acc = 0.0;
  for (const auto& g : fam) {
    auto p = basis_pairing(f, j, g.gamma);
    if (p != 0) acc += static_cast<double>(p) * psi_term(g, charge_value(g.gamma, zv), t, M, q);
  }
  return acc;
}

// (Omega/2pi) int s L(s) sum_{m<=M} e^{-ms} ds
template <class L>
cplx frequency_sum(double omega, L&& log_part, int M, const QuadSettings& q) {
  cplx full = integrate_half_line([&](double s) { return s * log_part(s) / std::expm1(s); }, q);
  if (M != kAllFrequencies)
    full -= integrate_exp([&](double s) { return s * log_part(s) / -std::expm1(-s); }, M + 1.0, q);
  return omega / kTwoPi * full;
}

cplx tau_term(const FamilyMember& g, cplx z, cplx t, int M, const QuadSettings& q) {
  sector_ratio(g, z, t);
  return log_tau_frequency_sum(g.omega, z, t, M, q);
}

cplx log_tau_from(const std::vector<FamilyMember>& fam, const std::vector<cplx>& zv, cplx t, int M,
                  const QuadSettings& q) {
  cplx acc = 0.0;
  for (const auto& g : fam) acc += tau_term(g, charge_value(g.gamma, zv), t, M, q);
  return acc;
}

const FamilyMember& find_member(const std::vector<FamilyMember>& fam, const Charge& gamma) {
  for (const auto& g : fam)
    if (g.gamma == gamma) return g;
  throw ValidationError("class " + to_string(gamma) + " is not in the half-plane family", "gamma");
}

double relative_step(double h, cplx x) {
  if (!(h > 0.0)) throw ValidationError("finite-difference step must be positive", "h");
  return h * (std::abs(x) > 0.0 ? std::abs(x) : 1.0);
}

}  // namespace

std::vector<FamilyMember> half_plane_family(const BpsStructure& s, cplx ray) {
  require_finite(ray, "ray");
  if (ray == 0.0) throw ValidationError("ray direction must be nonzero", "ray");
  if (!is_uncoupled(s)) throw ValidationError("structure is coupled", "spectrum");
  cplx dir = ray / std::abs(ray);
  std::vector<FamilyMember> out;
  for (const auto& g : s.active()) {
    cplx z = s.central_charge(g);
    double side = (z * std::conj(dir)).real();
    if (std::abs(side) <= 1e-12 * std::abs(z))
      throw SectorError("active class " + to_string(g) + " lies on the boundary of the half-plane", "ray");
    if (side > 0.0) out.push_back({g, z, to_double(s.omega(g))});
  }
  return out;
}

cplx arctan_tail(cplx w, int M, const QuadSettings& q) {
  check_truncation(M);
  return integrate_exp([&](double s) { return std::atan(s / w) / -std::expm1(-s); }, M + 1.0, q) / kPi;
}

cplx log_partial_sum_psi(const BpsStructure& s, int j, cplx t, double hbar, int M, const LimitOptions& o) {
  check_index(s, j);
  check_hbar(hbar);
  check_truncation(M);
  return log_psi_from(family_for(s, t, o), s.form(), j, s.z(), t, M, o.quad);
}

cplx partial_sum_psi(const BpsStructure& s, int j, cplx t, double hbar, int M, const LimitOptions& o) {
  return std::exp(log_partial_sum_psi(s, j, t, hbar, M, o));
}

cplx log_partial_sum_psi_direct(const BpsStructure& s, int j, cplx t, double hbar, int M, const LimitOptions& o) {
  check_index(s, j);
  check_hbar(hbar);
  check_truncation(M);
  Charge beta(s.rank(), 0);
  beta[j] = 1;
  cplx acc = 0.0;
  for (const auto& g : family_for(s, t, o)) {
    auto p = pairing(s.form(), g.gamma, beta);
    if (p == 0) continue;
    sector_ratio(g, g.z, t);
    for (int m = 1; m <= M; ++m) {
      SimpleOscillator osc(m, p, s.omega(g.gamma), g.z, s.z()[j], hbar);
      double sign = (m * p) % 2 == 0 ? 1.0 : -1.0;
      acc += sign / (m * hbar) * psi_12_symmetrized(osc, t / kTwoPi, o.quad);
    }
  }
  return acc;
}

cplx log_lambda_product_target(const BpsStructure& s, int j, cplx t, const LimitOptions& o) {
  check_index(s, j);
  cplx acc = 0.0;
  for (const auto& g : family_for(s, t, o)) {
    auto p = basis_pairing(s.form(), j, g.gamma);
    if (p != 0) acc += static_cast<double>(p) * g.omega * log_lambda(sector_ratio(g, g.z, t));
  }
  return acc;
}

cplx lambda_product_target(const BpsStructure& s, int j, cplx t, const LimitOptions& o) {
  return std::exp(log_lambda_product_target(s, j, t, o));
}

LimitReport limit_report(const std::vector<int>& Ms, const std::vector<cplx>& partials, cplx target) {
  if (Ms.size() < 4) throw ValidationError("at least 4 truncations are needed", "M");
  if (partials.size() != Ms.size()) throw ValidationError("one partial value per truncation", "M");
  for (size_t i = 0; i < Ms.size(); ++i) {
    check_truncation(Ms[i]);
    if (i > 0 && Ms[i] <= Ms[i - 1]) throw ValidationError("truncations must increase", "M");
  }
  LimitReport r;
  r.truncations = Ms;
  r.partials = partials;
  r.M = Ms.back();
  r.partial = partials.back();
  r.target = target;
  r.abs_error = std::abs(r.partial - target);

  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < Ms.size(); ++i) {
    double e = std::abs(partials[i] - target);
    if (!(e > 0.0)) continue;
    double x = std::log(static_cast<double>(Ms[i])), y = std::log(e);
    n += 1, sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  r.fitted_order = n >= 2 ? -(n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;

  size_t k = Ms.size() - 3;
  std::vector<double> x{1.0 / Ms[k], 1.0 / Ms[k + 1], 1.0 / Ms[k + 2]};
  r.extrapolated = extrapolate_to_zero(x, {partials[k], partials[k + 1], partials[k + 2]});
  r.extrapolated_error = std::abs(r.extrapolated - target);
  return r;
}

LimitReport psi_limit(const BpsStructure& s, int j, cplx t, double hbar, const std::vector<int>& Ms,
                      const LimitOptions& o) {
  std::vector<cplx> partials;
  for (int M : Ms) partials.push_back(log_partial_sum_psi(s, j, t, hbar, M, o));
  return limit_report(Ms, partials, log_lambda_product_target(s, j, t, o));
}

LimitReport binet_bridge(cplx z, const std::vector<int>& Ms, const QuadSettings& q) {
  require_finite(z, "z");
  if (!(z.real() > 0.0)) throw SectorError("needs Re(z) > 0", "z");
  if (Ms.empty()) throw ValidationError("no truncations", "M");
  cplx w = kTwoPi * z;
  std::vector<cplx> partials;
  cplx acc = 0.0;
  size_t next = 0;
  for (int m = 1; next < Ms.size(); ++m) {
    acc += integrate_exp([&](double s) { return std::atan(s / w); }, m, q) / kPi;
    while (next < Ms.size() && Ms[next] == m) {
      partials.push_back(acc);
      ++next;
    }
    if (next < Ms.size() && Ms[next] < m) throw ValidationError("truncations must increase", "M");
  }
  return limit_report(Ms, partials, binet_term(z, q));
}

cplx log_tau_m(double omega, cplx z, int m, cplx t, double hbar, const QuadSettings& q) {
  require_finite(z, "z");
  require_finite(t, "t");
  check_hbar(hbar);
  if (m < 1) throw ValidationError("frequency must be positive", "m");
  if (omega == 0.0) return 0.0;
  cplx w = z / t;
  if (std::abs(w.real()) <= 1e-14 * std::abs(w))
    throw SectorError("s^2 + (Z/t)^2 meets the branch cut of log on the integration ray", "t");
  cplx w2 = w * w;
  cplx integral = integrate_exp([&](double s) { return s * std::log(s * s + w2); }, m, q);
  return omega / kTwoPi * hbar * integral;
}

cplx log_partial_sum_tau(const BpsStructure& s, cplx t, double hbar, int M, const LimitOptions& o) {
  check_hbar(hbar);
  check_truncation(M);
  return log_tau_from(family_for(s, t, o), s.z(), t, M, o.quad);
}

cplx partial_sum_tau(const BpsStructure& s, cplx t, double hbar, int M, const LimitOptions& o) {
  return std::exp(log_partial_sum_tau(s, t, hbar, M, o));
}

cplx log_tau_frequency_sum(double omega, cplx z, cplx t, int M, const QuadSettings& q) {
  require_finite(z, "z");
  require_finite(t, "t");
  if (M < 0) throw ValidationError("truncation must be positive", "M");
  cplx w = kTwoPi * z / t;
  if (!(w.real() > 0.0)) throw SectorError("needs Re(Z/t) > 0", "t");
  cplx w2 = w * w;
  return frequency_sum(omega, [&](double s) { return std::log(s * s + w2); }, M, q);
}

cplx tau_frequency_remainder(double omega, cplx z, cplx t, int M, const QuadSettings& q) {
  require_finite(z, "z");
  require_finite(t, "t");
  if (M < 0) throw ValidationError("truncation must be positive", "M");
  cplx w = kTwoPi * z / t;
  if (!(w.real() > 0.0)) throw SectorError("needs Re(Z/t) > 0", "t");
  cplx inv2 = 1.0 / (w * w);
  return frequency_sum(omega, [&](double s) { return clog1p(s * s * inv2); }, M, q);
}

cplx log_partial_sum_tau_direct(const BpsStructure& s, cplx t, double hbar, int M, const LimitOptions& o) {
  check_hbar(hbar);
  check_truncation(M);
  cplx acc = 0.0;
  for (const auto& g : family_for(s, t, o)) {
    sector_ratio(g, g.z, t);
    for (int m = 1; m <= M; ++m) acc += log_tau_m(g.omega, g.z, m, t / kTwoPi, hbar, o.quad) / hbar;
  }
  return acc;
}

cplx central_difference(const std::function<cplx(double)>& f, double step) {
  if (!(step > 0.0)) throw ValidationError("finite-difference step must be positive", "h");
  cplx d[3];
  double k = step;
  for (auto& v : d) {
    v = (f(k) - f(-k)) / (2.0 * k);
    k *= 0.5;
  }
  double diff1 = std::abs(d[0] - d[1]), diff2 = std::abs(d[1] - d[2]);
  if (diff2 > 2.0 * diff1 && diff2 > 1e-8 * std::abs(d[0]))
    throw DivergenceError("finite-difference step too small: roundoff dominates", "h");
  return d[0];
}

cplx tau_gradient(const BpsStructure& s, const Charge& gamma, cplx t, double hbar, int M, double h,
                  const LimitOptions& o) {
  check_hbar(hbar);
  check_truncation(M);
  auto fam = family_for(s, t, o);
  const auto& g = find_member(fam, gamma);
  return central_difference([&](double d) { return tau_term(g, g.z + d, t, M, o.quad); }, relative_step(h, g.z));
}

cplx upsilon_gradient_target(const BpsStructure& s, const Charge& gamma, cplx t, double h) {
  s.check_charge(gamma, "gamma");
  cplx z = s.central_charge(gamma);
  double omega = to_double(s.omega(gamma));
  if (omega == 0.0) return 0.0;
  auto log_ups = [&](double d) {
    cplx w = (z + d) / t;
    return -std::log(w) / 12.0 + upsilon_remainder(w);
  };
  return omega * central_difference(log_ups, relative_step(h, z));
}

LimitReport tau_limit(const BpsStructure& s, const Charge& gamma, cplx t, double hbar, const std::vector<int>& Ms,
                      double h, const LimitOptions& o) {
  std::vector<cplx> partials;
  for (int M : Ms) partials.push_back(tau_gradient(s, gamma, t, hbar, M, h, o));
  return limit_report(Ms, partials, upsilon_gradient_target(s, gamma, t, h));
}

TauResidual tau_equation_residual(const BpsStructure& s, cplx t, double hbar, int M, double h,
                                  const LimitOptions& o) {
  check_hbar(hbar);
  check_truncation(M);
  auto fam = family_for(s, t, o);
  const auto& f = s.form();
  int n = s.rank();

  std::vector<cplx> grad(n, 0.0);
  for (int p = 0; p < n; ++p) {
    bool needed = false;
    for (int j = 0; j < n; ++j) needed = needed || f(j, p) != 0;
    if (!needed) continue;
    grad[p] = central_difference(
        [&](double d) {
          auto zv = s.z();
          zv[p] += d;
          return log_tau_from(fam, zv, t, M, o.quad);
        },
        relative_step(h, s.z()[p]));
  }

  TauResidual r;
  for (int j = 0; j < n; ++j) {
    cplx lhs = central_difference([&](double d) { return log_psi_from(fam, f, j, s.z(), t + d, M, o.quad); },
                                  relative_step(h, t));
    cplx rhs = 0.0;
    for (int p = 0; p < n; ++p)
      if (f(j, p) != 0) rhs += static_cast<double>(f(j, p)) * grad[p];
    r.lhs.push_back(lhs);
    r.rhs.push_back(rhs);
    r.residual.push_back(std::abs(lhs - rhs));
  }
  return r;
}

}  // namespace bpsosc
