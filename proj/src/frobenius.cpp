#include "bpsosc/frobenius.hpp"

#include <set>

namespace bpsosc {

namespace {

int sign_power(std::int64_t k) { return (k % 2 == 0) ? 1 : -1; }

const cplx kInvTwoPiI = 1.0 / (kTwoPi * kI);

void check_delta(const std::vector<Charge>& delta, int rank) {
  std::set<Charge> seen;
  for (size_t i = 0; i < delta.size(); ++i) {
    std::string field = "delta[" + std::to_string(i) + "]";
    if (static_cast<int>(delta[i].size()) != rank) throw ValidationError("charge length differs from rank", field);
    if (!seen.insert(delta[i]).second) throw ValidationError("repeated charge " + to_string(delta[i]), field);
  }
}

GaussRational lookup(const FMap& f, const Charge& a) {
  auto it = f.find(a);
  return it == f.end() ? GaussRational() : it->second;
}

std::string term_string(const GaussRational& c) {
  std::string s = to_string(c);
  return (c.re != 0 && c.im != 0) ? "(" + s + ")" : s;
}

}  // namespace

Charge primitive_direction(const Charge& a) {
  if (is_zero(a)) throw ValidationError("dlog of the zero charge", "charge");
  std::int64_t g = content(a);
  Charge p(a.size());
  for (size_t i = 0; i < a.size(); ++i) p[i] = a[i] / g;
  for (auto x : p) {
    if (x == 0) continue;
    if (x < 0) p = -p;
    break;
  }
  return p;
}

void SymbolicOneForm::add(const Charge& a, const GaussRational& c) {
  if (c.is_zero()) return;
  Charge p = primitive_direction(a);
  auto& slot = terms[p];
  slot += c;
  if (slot.is_zero()) terms.erase(p);
}

void SymbolicTwoForm::add_wedge(const Charge& p0, const Charge& q0, const GaussRational& c) {
  Charge p = primitive_direction(p0), q = primitive_direction(q0);
  if (p == q || c.is_zero()) return;
  GaussRational coeff = c;
  if (q < p) {
    std::swap(p, q);
    coeff = -coeff;
  }
  auto key = std::make_pair(p, q);
  auto& slot = terms[key];
  slot += coeff;
  if (slot.is_zero()) terms.erase(key);
}

std::string to_string(const SymbolicOneForm& w) {
  if (w.terms.empty()) return "0";
  std::string s;
  for (const auto& [p, c] : w.terms) s += (s.empty() ? "" : " + ") + term_string(c) + " dlogZ" + to_string(p);
  return s;
}

std::string to_string(const SymbolicTwoForm& w) {
  if (w.terms.empty()) return "0";
  std::string s;
  for (const auto& [pq, c] : w.terms)
    s += (s.empty() ? "" : " + ") + term_string(c) + " dlogZ" + to_string(pq.first) + "^dlogZ" + to_string(pq.second);
  return s;
}

Rational joyce_uncoupled_exact(const BpsStructure& s, const Charge& a) {
  if (!is_uncoupled(s)) throw ValidationError("joyce coefficients need an uncoupled structure", "active_classes");
  if (is_zero(a)) return 0;
  return dt_spectrum(s, a);
}

cplx joyce_uncoupled(const BpsStructure& s, const Charge& a) { return to_double(joyce_uncoupled_exact(s, a)) * kInvTwoPiI; }

FMap joyce_table(const BpsStructure& s, const std::vector<Charge>& delta) {
  if (!is_uncoupled(s)) throw ValidationError("joyce coefficients need an uncoupled structure", "active_classes");
  FMap f;
  for (const auto& a : delta)
    for (const auto& b : delta) {
      if (a == b) continue;
      Rational v = dt_spectrum(s, a - b);
      if (v != 0) f[a - b] = GaussRational(v);
    }
  return f;
}

ProjectedConnection projected_connection(const SkewForm& form, const std::vector<cplx>& z, const FMap& f,
                                         const std::vector<Charge>& delta) {
  check_delta(delta, form.rank());
  for (const auto& [a, c] : f) {
    auto it = f.find(-a);
    if (it == f.end() || !(it->second == c)) throw ValidationError("f is not symmetric under negation at " + to_string(a), "f");
  }
  int n = static_cast<int>(delta.size());
  ProjectedConnection pc;
  pc.delta = delta;
  pc.a.assign(n, std::vector<SymbolicOneForm>(n));
  pc.v_exact.assign(n, std::vector<GaussRational>(n));
  pc.conn.size = n;
  pc.conn.v.assign(n, std::vector<cplx>(n, 0.0));
  for (int j = 0; j < n; ++j) {
    cplx u = 0.0;
    for (int k = 0; k < form.rank(); ++k) u += static_cast<double>(delta[j][k]) * z[k];
    pc.conn.u_diag.push_back(u);
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      Charge d = delta[j] - delta[i];
      std::int64_t p = pairing(form, delta[j], delta[i]);
      GaussRational c = GaussRational(sign_power(p) * p) * lookup(f, d);
      pc.v_exact[j][i] = c;
      pc.a[j][i].add(d, c);
      pc.conn.v[j][i] = c.value() * kInvTwoPiI;
    }
  }
  return pc;
}

ProjectedConnection projected_connection(const BpsStructure& s, const std::vector<Charge>& delta) {
  check_delta(delta, s.rank());
  return projected_connection(s.form(), s.z(), joyce_table(s, delta), delta);
}

TwoFormMatrix curvature(const OneFormMatrix& a) {
  size_t n = a.size();
  TwoFormMatrix F(n, std::vector<SymbolicTwoForm>(n));
  for (size_t j = 0; j < n; ++j)
    for (size_t i = 0; i < n; ++i)
      for (size_t k = 0; k < n; ++k)
        for (const auto& [p, cp] : a[j][k].terms)
          for (const auto& [q, cq] : a[k][i].terms) F[j][i].add_wedge(p, q, cp * cq);
  return F;
}

OneFormMatrix commutator(const OneFormMatrix& a, const std::vector<std::vector<GaussRational>>& v) {
  size_t n = a.size();
  OneFormMatrix out(n, std::vector<SymbolicOneForm>(n));
  for (size_t k = 0; k < n; ++k)
    for (size_t l = 0; l < n; ++l)
      for (size_t p = 0; p < n; ++p) {
        for (const auto& [d, c] : a[k][p].terms) out[k][l].add(d, c * v[p][l]);
        for (const auto& [d, c] : a[p][l].terms) out[k][l].add(d, -(v[k][p] * c));
      }
  return out;
}

AxiomReport check_frobenius_axioms(const SkewForm& form, const std::vector<cplx>& z, const FMap& f,
                                   const std::vector<Charge>& delta) {
  ProjectedConnection pc = projected_connection(form, z, f, delta);
  AxiomReport r;
  size_t n = delta.size();
  auto F = curvature(pc.a);
  for (size_t j = 0; j < n && r.flat; ++j)
    for (size_t i = 0; i < n; ++i)
      if (!F[j][i].is_zero()) {
        r.flat = false;
        r.witness = "F[" + std::to_string(j) + "][" + std::to_string(i) + "] = (2 pi i)^-2 (" + to_string(F[j][i]) + ")";
        break;
      }
  auto C = commutator(pc.a, pc.v_exact);
  for (size_t j = 0; j < n && r.commutes; ++j)
    for (size_t i = 0; i < n; ++i)
      if (!C[j][i].is_zero()) {
        r.commutes = false;
        if (r.witness.empty())
          r.witness = "[A,V][" + std::to_string(j) + "][" + std::to_string(i) + "] = (2 pi i)^-2 (" + to_string(C[j][i]) + ")";
        break;
      }
  for (size_t j = 0; j < n; ++j)
    for (size_t i = 0; i < n; ++i)
      if (!(pc.v_exact[j][i] == -pc.v_exact[i][j])) r.v_skew = false;
  // Linearity of u in Z: u(Z' + Z'') = u(Z') + u(Z'') for two independent probes.
  std::vector<cplx> z1(z.size()), z2(z.size()), z12(z.size());
  for (size_t k = 0; k < z.size(); ++k) {
    z1[k] = z[k];
    z2[k] = cplx(1.0 + k, 0.5 - 0.25 * k);
    z12[k] = z1[k] + z2[k];
  }
  auto u1 = projected_connection(form, z1, {}, delta).conn.u_diag;
  auto u2 = projected_connection(form, z2, {}, delta).conn.u_diag;
  auto u12 = projected_connection(form, z12, {}, delta).conn.u_diag;
  for (size_t i = 0; i < n; ++i) {
    double scale = std::abs(u1[i]) + std::abs(u2[i]) + 1.0;
    if (std::abs(u12[i] - u1[i] - u2[i]) > 1e-12 * scale || std::abs(pc.conn.u_diag[i] - u1[i]) > 1e-12 * scale)
      r.u_linear = false;
  }
  return r;
}

AxiomReport check_frobenius_axioms(const BpsStructure& s, const std::vector<Charge>& delta) {
  check_delta(delta, s.rank());
  return check_frobenius_axioms(s.form(), s.z(), joyce_table(s, delta), delta);
}

std::vector<Charge> oscillator_subset(const Charge& gamma, const Charge& beta, int n, const SkewForm& form) {
  if (n <= 0 || n % 2) throw ValidationError("oscillator subset size must be even and positive", "oscillator.N");
  if (pairing(form, gamma, beta) == 0) throw ValidationError("oscillator needs <gamma, beta> != 0", "oscillator");
  std::vector<Charge> out;
  for (int m = 1; m <= n / 2; ++m) {
    out.push_back(m * (gamma + beta));
    out.push_back(m * beta);
  }
  return out;
}

MeromorphicConnection rescale_hbar(const MeromorphicConnection& conn, double hbar) {
  if (!(hbar >= 0.0)) throw ValidationError("hbar must be nonnegative", "hbar");
  MeromorphicConnection out = conn;
  for (auto& row : out.v)
    for (auto& x : row) x *= kI * hbar;
  return out;
}

CoupledWitness coupled_witness() {
  CoupledWitness w{SkewForm({{0, -1}, {1, 0}}), {cplx(1.0, 0.2), cplx(-0.3, 1.0)}, {}, {{1, 0}, {0, 1}, {1, 1}}};
  // <(1,0),(0,1)> = -1, <(0,1),(1,1)> = 1, <(1,0),(1,1)> = -1: every pair couples.
  for (const auto& a : w.delta)
    for (const auto& b : w.delta)
      if (a != b) w.f[a - b] = GaussRational(1);
  return w;
}

}  // namespace bpsosc
