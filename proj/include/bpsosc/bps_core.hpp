#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bpsosc/common.hpp"

namespace bpsosc {

using Charge = std::vector<std::int64_t>;

Charge operator+(const Charge& a, const Charge& b);
Charge operator-(const Charge& a, const Charge& b);
Charge operator-(const Charge& a);
Charge operator*(std::int64_t k, const Charge& a);
bool is_zero(const Charge& a);
std::int64_t content(const Charge& a);  // gcd of the coordinates
std::string to_string(const Charge& a);

class SkewForm {
 public:
  SkewForm() = default;
  explicit SkewForm(std::vector<std::vector<std::int64_t>> matrix);
  int rank() const { return static_cast<int>(m_.size()); }
  std::int64_t operator()(int i, int j) const { return m_[i][j]; }
  const std::vector<std::vector<std::int64_t>>& matrix() const { return m_; }

 private:
  std::vector<std::vector<std::int64_t>> m_;
};

std::int64_t pairing(const SkewForm& f, const Charge& a, const Charge& b);

// Exact complex number with rational parts.
struct GaussRational {
  Rational re = 0, im = 0;
  GaussRational() = default;
  GaussRational(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
  GaussRational(long long r) : re(r) {}
  bool is_zero() const { return re == 0 && im == 0; }
  cplx value() const { return {to_double(re), to_double(im)}; }
  GaussRational& operator+=(const GaussRational& o);
  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(const GaussRational& a) { return {-a.re, -a.im}; }
  friend GaussRational operator-(const GaussRational& a, const GaussRational& b) { return a + (-b); }
  friend GaussRational operator*(const GaussRational& a, const GaussRational& b);
  friend bool operator==(const GaussRational& a, const GaussRational& b) { return a.re == b.re && a.im == b.im; }
};
std::string to_string(const GaussRational& q);

class AlgebraElement {
 public:
  AlgebraElement() = default;
  static AlgebraElement generator(const Charge& a, GaussRational coeff = 1);
  void add(const Charge& a, const GaussRational& coeff);
  const std::map<Charge, GaussRational>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  AlgebraElement& operator+=(const AlgebraElement& o);
  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) { return a.terms_ == b.terms_; }

 private:
  std::map<Charge, GaussRational> terms_;
};

AlgebraElement twisted_product(const AlgebraElement& a, const AlgebraElement& b, const SkewForm& f);
AlgebraElement poisson_bracket(const AlgebraElement& a, const AlgebraElement& b, const SkewForm& f);

using Spectrum = std::map<Charge, Rational>;

// Adds -a for every stored a; conflicting values or zero entries are rejected.
Spectrum symmetrize(const Spectrum& omega);

class BpsStructure {
 public:
  BpsStructure(SkewForm form, std::vector<cplx> z, Spectrum omega, double support_constant = 0.0);

  int rank() const { return form_.rank(); }
  const SkewForm& form() const { return form_; }
  const std::vector<cplx>& z() const { return z_; }
  const Spectrum& spectrum() const { return omega_; }
  double support_constant() const { return support_constant_; }

  cplx central_charge(const Charge& a) const;
  Rational omega(const Charge& a) const;
  std::vector<Charge> active() const;
  void check_charge(const Charge& a, const std::string& field = "charge") const;

 private:
  SkewForm form_;
  std::vector<cplx> z_;
  Spectrum omega_;
  double support_constant_ = 0.0;
};

Rational dt_spectrum(const BpsStructure& s, const Charge& a);
bool is_uncoupled(const BpsStructure& s);

struct ActiveRay {
  cplx direction;
  double angle;  // in [0, 2 pi)
  std::vector<Charge> classes;
};

std::vector<ActiveRay> active_rays(const BpsStructure& s, double rel_tol = 1e-12);

enum class QBranch { MinusExpMinusIh, MinusExpPlusIh };
enum class HalfPower { Unspecified, Principal };

double q_bracket_deviation(const Charge& a, const Charge& b, const SkewForm& f, double hbar,
                           QBranch branch = QBranch::MinusExpMinusIh, HalfPower half = HalfPower::Unspecified);

}  // namespace bpsosc
