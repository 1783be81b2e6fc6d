#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bpsosc/common.hpp"
#include "bpsosc/quadrature.hpp"

namespace bpsosc {

// Truncated power series in one variable; products and sums drop exponents above the truncation.
class FormalSeries {
 public:
  FormalSeries(std::string variable, int truncation);

  const std::string& variable() const { return variable_; }
  int truncation() const { return truncation_; }
  const std::map<int, cplx>& coefficients() const { return coeffs_; }
  cplx coefficient(int k) const;
  void set(int k, cplx value);

  FormalSeries& operator+=(const FormalSeries& o);
  friend FormalSeries operator+(FormalSeries a, const FormalSeries& b) { return a += b; }
  friend FormalSeries operator*(const FormalSeries& a, const FormalSeries& b);

  // Substitutes variable = factor * new_variable.
  FormalSeries substitute_scaled(const std::string& new_variable, cplx factor) const;

 private:
  std::string variable_;
  int truncation_;
  std::map<int, cplx> coeffs_;
};

struct CurveClass {
  Rational gv0;
  cplx v;
  cplx x() const;  // exp(2 pi i v)
};
using CurveClassTable = std::map<std::string, CurveClass>;

void validate(const CurveClassTable& table);

Rational constant_map_prefactor(int genus);
Rational curve_prefactor(int genus);

struct CurveTerm {
  std::string label;
  Rational prefactor;  // multiplies Li_{order}(x)
  int polylog_order;
  cplx x;
  cplx value() const;
};

// Coefficient of lambda^{2g-2}: chi * constant_map + sum of curve terms.
struct GvCoefficient {
  int genus;
  Rational constant_map;
  std::vector<CurveTerm> curve_terms;
};

struct GvSeries {
  int chi;
  std::vector<GvCoefficient> coefficients;  // genus 2 .. g_max
  FormalSeries series;
};

inline constexpr int kMaxGenus = 16;

GvSeries gv_series(int chi, const CurveClassTable& table, int g_max);

struct CyClass {
  std::string label;
  std::int64_t n;
  cplx z;  // v - n
  Rational omega;
};

struct CyContext {
  int n_window;
  std::vector<CyClass> classes;  // ordered by label, then n
};

// Classes (n, beta) for |n| <= n_window. omega_beta defaults to GV(0, beta) for missing labels.
CyContext cy_bps_structure(const CurveClassTable& table, int n_window,
                           const std::map<std::string, Rational>& omega_beta = {},
                           std::optional<cplx> t = std::nullopt);

struct CyTauSum {
  cplx log_value;
  double frequency_tail;  // |all frequencies - first M|, summed over classes
  double window_edge;     // magnitude of the two outermost window terms
};

CyTauSum oscillator_tau_sum_cy(const CyContext& ctx, cplx t, double hbar, int M, const QuadSettings& q = {});

struct ResumCheck {
  cplx lhs;  // sum_{|n| <= N} (v - n)^{2-2g}
  cplx rhs;  // (2 pi i)^{2g-2}/(2g-3)! sum_d d^{2g-3} e^{2 pi i d v}
  double error;
};

ResumCheck resum_check(cplx v, int genus, int n_window);
// lhs extrapolated in 1/N over increasing windows.
ResumCheck resum_check_extrapolated(cplx v, int genus, const std::vector<int>& windows);

// Coefficients a_g of F(tau) = sum_{g>=2} a_g tau^{2g-2}, by repeated extrapolation in tau^2 to 0.
std::vector<cplx> even_taylor_coefficients(const std::vector<double>& taus, const std::vector<cplx>& values,
                                           int g_max);
std::vector<double> default_taus();

struct CoefficientComparison {
  int genus;
  std::vector<int> windows;
  std::vector<cplx> per_window;  // t^{2g-2} coefficient of the windowed sum
  cplx extrapolated;             // in 1/N
  cplx expected;                 // curve term of gv_series, converted from lambda = 2 pi t
  double rel_error;
};

// Windowed sums of the decaying part of log Upsilon((v - n)/t), coefficient by coefficient in t.
std::vector<CoefficientComparison> gv_upsilon_comparison(const CurveClass& c, const std::vector<int>& windows,
                                                         int g_max, const QuadSettings& q = {});
// The same extraction applied to the oscillator tau sums (all frequencies).
std::vector<CoefficientComparison> gv_tau_comparison(const CurveClass& c, const std::vector<int>& windows,
                                                     int g_max, const QuadSettings& q = {});

}  // namespace bpsosc
