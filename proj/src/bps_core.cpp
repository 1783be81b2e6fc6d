#include "bpsosc/bps_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bpsosc {

namespace {

void same_length(const Charge& a, const Charge& b) {
  if (a.size() != b.size()) throw ValidationError("charge length mismatch", "charge");
}

int sign_power(std::int64_t k) { return (k % 2 == 0) ? 1 : -1; }

}  // namespace

Charge operator+(const Charge& a, const Charge& b) {
  same_length(a, b);
  Charge c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

Charge operator-(const Charge& a, const Charge& b) { return a + (-b); }

Charge operator-(const Charge& a) {
  Charge c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = -a[i];
  return c;
}

Charge operator*(std::int64_t k, const Charge& a) {
  Charge c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = k * a[i];
  return c;
}

bool is_zero(const Charge& a) {
  return std::all_of(a.begin(), a.end(), [](std::int64_t x) { return x == 0; });
}

std::int64_t content(const Charge& a) {
  std::int64_t g = 0;
  for (auto x : a) g = std::gcd(g, x < 0 ? -x : x);
  return g;
}

std::string to_string(const Charge& a) {
  std::string s = "(";
  for (size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
  return s + ")";
}

SkewForm::SkewForm(std::vector<std::vector<std::int64_t>> matrix) : m_(std::move(matrix)) {
  int n = rank();
  if (n == 0) throw ValidationError("empty pairing matrix", "pairing");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(m_[i].size()) != n) throw ValidationError("pairing matrix is not square", "pairing");
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (m_[i][j] + m_[j][i] != 0)
        throw ValidationError("pairing matrix is not antisymmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")",
                              "pairing");
}

std::int64_t pairing(const SkewForm& f, const Charge& a, const Charge& b) {
  if (static_cast<int>(a.size()) != f.rank() || static_cast<int>(b.size()) != f.rank())
    throw ValidationError("dimension mismatch between charge and pairing", "charge");
  std::int64_t acc = 0;
  for (int i = 0; i < f.rank(); ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < f.rank(); ++j) acc += a[i] * f(i, j) * b[j];
  }
  return acc;
}

GaussRational& GaussRational::operator+=(const GaussRational& o) {
  re += o.re;
  im += o.im;
  return *this;
}

GaussRational operator*(const GaussRational& a, const GaussRational& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

std::string to_string(const GaussRational& q) {
  if (q.im == 0) return rational_string(q.re);
  if (q.re == 0) return rational_string(q.im) + "i";
  return rational_string(q.re) + (q.im > 0 ? "+" : "") + rational_string(q.im) + "i";
}

AlgebraElement AlgebraElement::generator(const Charge& a, GaussRational coeff) {
  AlgebraElement e;
  e.add(a, coeff);
  return e;
}

void AlgebraElement::add(const Charge& a, const GaussRational& coeff) {
  if (coeff.is_zero()) return;
  auto it = terms_.find(a);
  if (it == terms_.end()) {
    terms_.emplace(a, coeff);
    return;
  }
  it->second += coeff;
  if (it->second.is_zero()) terms_.erase(it);
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  for (const auto& [a, c] : o.terms_) add(a, c);
  return *this;
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
  AlgebraElement r = a;
  for (const auto& [k, c] : b.terms()) r.add(k, -c);
  return r;
}

AlgebraElement twisted_product(const AlgebraElement& a, const AlgebraElement& b, const SkewForm& f) {
  AlgebraElement r;
  for (const auto& [x, cx] : a.terms())
    for (const auto& [y, cy] : b.terms()) r.add(x + y, GaussRational(sign_power(pairing(f, x, y))) * cx * cy);
  return r;
}

AlgebraElement poisson_bracket(const AlgebraElement& a, const AlgebraElement& b, const SkewForm& f) {
  AlgebraElement r;
  for (const auto& [x, cx] : a.terms())
    for (const auto& [y, cy] : b.terms()) {
      std::int64_t p = pairing(f, x, y);
      if (p != 0) r.add(x + y, GaussRational(sign_power(p) * p) * cx * cy);
    }
  return r;
}

Spectrum symmetrize(const Spectrum& omega) {
  Spectrum out;
  for (const auto& [a, w] : omega) {
    if (w == 0) continue;
    if (is_zero(a)) throw ValidationError("zero charge in the spectrum", "active_classes");
    for (const Charge& key : {a, -a}) {
      auto it = out.find(key);
      if (it != out.end() && it->second != w)
        throw ValidationError("spectrum is not symmetric under negation at " + to_string(key), "active_classes");
      out[key] = w;
    }
  }
  return out;
}

BpsStructure::BpsStructure(SkewForm form, std::vector<cplx> z, Spectrum omega, double support_constant)
    : form_(std::move(form)), z_(std::move(z)), omega_(std::move(omega)), support_constant_(support_constant) {
  if (static_cast<int>(z_.size()) != rank()) throw ValidationError("central charge length differs from rank", "central_charges");
  for (size_t i = 0; i < z_.size(); ++i) require_finite(z_[i], "central_charges[" + std::to_string(i) + "]");
  if (!(support_constant_ >= 0.0)) throw ValidationError("support constant must be nonnegative", "support_constant");
  for (const auto& [a, w] : omega_) {
    check_charge(a, "active_classes");
    if (w == 0) throw ValidationError("stored spectrum value is zero at " + to_string(a), "active_classes");
    auto it = omega_.find(-a);
    if (it == omega_.end() || it->second != w)
      throw ValidationError("spectrum is not symmetric under negation at " + to_string(a), "active_classes");
    cplx za = central_charge(a);
    std::int64_t norm = 0;
    for (auto x : a) norm = std::max<std::int64_t>(norm, x < 0 ? -x : x);
    if (support_constant_ > 0.0 && !(std::abs(za) > support_constant_ * static_cast<double>(norm)))
      throw ValidationError("support property |Z(a)| > C |a| fails at " + to_string(a), "active_classes");
  }
}

void BpsStructure::check_charge(const Charge& a, const std::string& field) const {
  if (static_cast<int>(a.size()) != rank()) throw ValidationError("charge length differs from rank", field);
  if (is_zero(a)) throw ValidationError("zero charge", field);
}

cplx BpsStructure::central_charge(const Charge& a) const {
  if (static_cast<int>(a.size()) != rank()) throw ValidationError("charge length differs from rank", "charge");
  cplx acc = 0.0;
  for (int i = 0; i < rank(); ++i) acc += static_cast<double>(a[i]) * z_[i];
  return acc;
}

Rational BpsStructure::omega(const Charge& a) const {
  auto it = omega_.find(a);
  return it == omega_.end() ? Rational(0) : it->second;
}

std::vector<Charge> BpsStructure::active() const {
  std::vector<Charge> out;
  for (const auto& kv : omega_) out.push_back(kv.first);
  return out;
}

Rational dt_spectrum(const BpsStructure& s, const Charge& a) {
  if (static_cast<int>(a.size()) != s.rank()) throw ValidationError("charge length differs from rank", "charge");
  if (is_zero(a)) throw ValidationError("dt is undefined at the zero charge", "charge");
  std::int64_t g = content(a);
  Rational acc = 0;
  for (std::int64_t k = 1; k <= g; ++k) {
    if (g % k) continue;
    Charge b(a.size());
    for (size_t i = 0; i < a.size(); ++i) b[i] = a[i] / k;
    Rational w = s.omega(b);
    if (w != 0) acc += w / Rational(k * k);
  }
  return acc;
}

bool is_uncoupled(const BpsStructure& s) {
  auto act = s.active();
  for (size_t i = 0; i < act.size(); ++i)
    for (size_t j = i + 1; j < act.size(); ++j)
      if (pairing(s.form(), act[i], act[j]) != 0) return false;
  return true;
}

std::vector<ActiveRay> active_rays(const BpsStructure& s, double rel_tol) {
  struct Item {
    double angle;
    cplx z;
    Charge c;
  };
  std::vector<Item> items;
  for (const Charge& a : s.active()) {
    cplx z = s.central_charge(a);
    if (std::abs(z) == 0.0) throw ValidationError("degenerate central charge Z = 0 at active class " + to_string(a), "central_charges");
    double ang = std::atan2(z.imag(), z.real());
    if (ang < 0) ang += kTwoPi;
    items.push_back({ang, z, a});
  }
  std::stable_sort(items.begin(), items.end(), [](const Item& x, const Item& y) { return x.angle < y.angle; });
  auto same_ray = [&](cplx a, cplx b) {
    double cross = a.real() * b.imag() - a.imag() * b.real();
    double dot = a.real() * b.real() + a.imag() * b.imag();
    return dot > 0 && std::abs(cross) <= rel_tol * std::abs(a) * std::abs(b);
  };
  std::vector<ActiveRay> rays;
  for (const Item& it : items) {
    bool placed = false;
    for (auto& r : rays)
      if (same_ray(r.direction, it.z)) {
        r.classes.push_back(it.c);
        placed = true;
        break;
      }
    if (!placed) rays.push_back({it.z / std::abs(it.z), it.angle, {it.c}});
  }
  for (auto& r : rays) std::sort(r.classes.begin(), r.classes.end());
  return rays;
}

double q_bracket_deviation(const Charge& a, const Charge& b, const SkewForm& f, double hbar, QBranch branch,
                           HalfPower half) {
  if (!(hbar > 0.0 && hbar <= 1.0)) throw ValidationError("hbar must lie in (0, 1]", "hbar");
  std::int64_t k = pairing(f, a, b);
  if (k == 0) return 0.0;
  double sgn = branch == QBranch::MinusExpMinusIh ? -1.0 : 1.0;
  cplx q = -std::exp(kI * (sgn * hbar));
  cplx qk;
  if (k % 2 == 0) {
    qk = std::pow(q, static_cast<int>(k / 2));
  } else {
    if (half != HalfPower::Principal) throw ValidationError("odd pairing needs a declared square-root branch", "branch");
    qk = std::pow(std::exp(0.5 * std::log(q)), static_cast<int>(k));
  }
  cplx lhs = qk - 1.0 / qk;
  cplx rhs = kI * hbar * static_cast<double>(sign_power(k) * k);
  return std::abs(lhs - rhs);
}

}  // namespace bpsosc
