#include "bpsosc/gv.hpp"

#include <algorithm>
#include <cmath>

#include "bpsosc/largen_tau.hpp"
#include "bpsosc/specfun.hpp"

namespace bpsosc {

namespace {

void check_genus(int g, const std::string& field) {
  if (g < 2 || g > kMaxGenus) throw ValidationError("genus must lie in [2, " + std::to_string(kMaxGenus) + "]", field);
}

BigInt factorial(int n) {
  BigInt f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

Rational sign_pow(int k) { return k % 2 == 0 ? 1 : -1; }

std::string class_field(const std::string& label) { return "curve_classes." + label + ".v"; }

// Solves the (small) dense system a x = b by Gaussian elimination with partial pivoting.
std::vector<cplx> solve_dense(std::vector<std::vector<cplx>> a, std::vector<cplx> b) {
  size_t n = b.size();
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    for (size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    if (std::abs(a[c][c]) == 0.0) throw DivergenceError("singular extrapolation system");
    for (size_t r = c + 1; r < n; ++r) {
      cplx f = a[r][c] / a[c][c];
      for (size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<cplx> x(n);
  for (size_t i = n; i-- > 0;) {
    cplx acc = b[i];
    for (size_t k = i + 1; k < n; ++k) acc -= a[i][k] * x[k];
    x[i] = acc / a[i][i];
  }
  return x;
}

void check_windows(const std::vector<int>& windows) {
  if (windows.size() < 2) throw ValidationError("at least two windows are needed", "n_window");
  for (size_t i = 0; i < windows.size(); ++i)
    if (windows[i] < 1 || (i > 0 && windows[i] <= windows[i - 1]))
      throw ValidationError("windows must be positive and increasing", "n_window");
}

template <class Remainder>
std::vector<CoefficientComparison> compare_windowed(const CurveClass& c, const std::vector<int>& windows, int g_max,
                                                    Remainder&& remainder) {
  check_windows(windows);
  check_genus(g_max, "g_max");
  if (!(c.v.imag() > 0.0)) throw SectorError("needs Im v > 0", "v");
  auto taus = default_taus();
  int top = windows.back();
  // per_tau[k][w]: windowed sum at tau_k for window w
  std::vector<std::vector<cplx>> per_tau(taus.size());
  for (size_t k = 0; k < taus.size(); ++k) {
    cplx t(0.0, taus[k]);
    cplx acc = remainder(c.v, t);
    size_t next = 0;
    for (int n = 1; n <= top; ++n) {
      acc += remainder(c.v - static_cast<double>(n), t) + remainder(c.v + static_cast<double>(n), t);
      while (next < windows.size() && windows[next] == n) {
        per_tau[k].push_back(acc);
        ++next;
      }
    }
  }

  auto gv = gv_series(0, {{"beta", c}}, g_max);
  std::vector<CoefficientComparison> out;
  for (int g = 2; g <= g_max; ++g) {
    CoefficientComparison cc;
    cc.genus = g;
    cc.windows = windows;
    out.push_back(cc);
  }
  for (size_t w = 0; w < windows.size(); ++w) {
    std::vector<cplx> values;
    for (size_t k = 0; k < taus.size(); ++k) values.push_back(per_tau[k][w]);
    auto a = even_taylor_coefficients(taus, values, g_max);
    // t = i tau, so t^{2g-2} = (-1)^{g-1} tau^{2g-2}
    for (int g = 2; g <= g_max; ++g) out[g - 2].per_window.push_back((g % 2 == 0 ? -1.0 : 1.0) * a[g - 2]);
  }
  std::vector<double> inv;
  for (int n : windows) inv.push_back(1.0 / n);
  for (auto& cc : out) {
    cc.extrapolated = extrapolate_to_zero(inv, cc.per_window);
    cc.expected = gv.coefficients[cc.genus - 2].curve_terms.front().value() * std::pow(kTwoPi, 2 * cc.genus - 2);
    cc.rel_error = std::abs(cc.extrapolated - cc.expected) / std::abs(cc.expected);
  }
  return out;
}

}  // namespace

FormalSeries::FormalSeries(std::string variable, int truncation) : variable_(std::move(variable)), truncation_(truncation) {
  if (truncation < 0) throw ValidationError("truncation must be nonnegative", "truncation");
}

cplx FormalSeries::coefficient(int k) const {
  auto it = coeffs_.find(k);
  return it == coeffs_.end() ? cplx(0.0) : it->second;
}

void FormalSeries::set(int k, cplx value) {
  if (k < 0 || k > truncation_) throw ValidationError("exponent outside [0, truncation]", "exponent");
  require_finite(value, "coefficient");
  if (value == 0.0)
    coeffs_.erase(k);
  else
    coeffs_[k] = value;
}

FormalSeries& FormalSeries::operator+=(const FormalSeries& o) {
  if (o.variable_ != variable_) throw ValidationError("series in different variables", "variable");
  truncation_ = std::min(truncation_, o.truncation_);
  std::map<int, cplx> sum;
  for (const auto& [k, c] : coeffs_)
    if (k <= truncation_) sum[k] += c;
  for (const auto& [k, c] : o.coeffs_)
    if (k <= truncation_) sum[k] += c;
  std::erase_if(sum, [](const auto& kv) { return kv.second == 0.0; });
  coeffs_ = std::move(sum);
  return *this;
}

FormalSeries operator*(const FormalSeries& a, const FormalSeries& b) {
  if (a.variable_ != b.variable_) throw ValidationError("series in different variables", "variable");
  FormalSeries out(a.variable_, std::min(a.truncation_, b.truncation_));
  std::map<int, cplx> prod;
  for (const auto& [i, x] : a.coeffs_)
    for (const auto& [j, y] : b.coeffs_)
      if (i + j <= out.truncation_) prod[i + j] += x * y;
  for (const auto& [k, c] : prod) out.set(k, c);
  return out;
}

FormalSeries FormalSeries::substitute_scaled(const std::string& new_variable, cplx factor) const {
  FormalSeries out(new_variable, truncation_);
  for (const auto& [k, c] : coeffs_) out.set(k, c * std::pow(factor, k));
  return out;
}

cplx CurveClass::x() const { return std::exp(kTwoPi * kI * v); }

void validate(const CurveClassTable& table) {
  for (const auto& [label, c] : table) {
    require_finite(c.v, class_field(label));
    if (c.v.imag() == 0.0) throw ValidationError("|x| = 1 for real v", class_field(label));
  }
}

Rational constant_map_prefactor(int genus) {
  check_genus(genus, "genus");
  int g = genus;
  Rational denom = Rational(4 * g * (2 * g - 2)) * Rational(factorial(2 * g - 2));
  return sign_pow(g - 1) * bernoulli(2 * g) * bernoulli(2 * g - 2) / denom;
}

Rational curve_prefactor(int genus) {
  check_genus(genus, "genus");
  int g = genus;
  return sign_pow(g - 1) * bernoulli(2 * g) / (Rational(2 * g) * Rational(factorial(2 * g - 2)));
}

cplx CurveTerm::value() const { return to_double(prefactor) * polylog_neg(-polylog_order, x); }

GvSeries gv_series(int chi, const CurveClassTable& table, int g_max) {
  check_genus(g_max, "g_max");
  validate(table);
  GvSeries out{chi, {}, FormalSeries("lambda", 2 * g_max - 2)};
  for (int g = 2; g <= g_max; ++g) {
    GvCoefficient c{g, constant_map_prefactor(g), {}};
    cplx value = static_cast<double>(chi) * to_double(c.constant_map);
    for (const auto& [label, cls] : table) {
      if (cls.gv0 == 0) continue;
      CurveTerm term{label, cls.gv0 * curve_prefactor(g), 3 - 2 * g, cls.x()};
      value += term.value();
      c.curve_terms.push_back(std::move(term));
    }
    out.series.set(2 * g - 2, value);
    out.coefficients.push_back(std::move(c));
  }
  return out;
}

CyContext cy_bps_structure(const CurveClassTable& table, int n_window, const std::map<std::string, Rational>& omega_beta,
                           std::optional<cplx> t) {
  if (n_window < 0) throw ValidationError("window must be nonnegative", "n_window");
  for (const auto& [label, c] : table) {
    require_finite(c.v, class_field(label));
    if (!(c.v.imag() > 0.0)) throw SectorError("needs Im v > 0", class_field(label));
  }
  for (const auto& [label, w] : omega_beta)
    if (!table.count(label)) throw ValidationError("omega given for unknown curve class", "omega_beta." + label);
  CyContext ctx{n_window, {}};
  for (const auto& [label, c] : table) {
    auto it = omega_beta.find(label);
    Rational omega = it == omega_beta.end() ? c.gv0 : it->second;
    for (std::int64_t n = -n_window; n <= n_window; ++n) {
      cplx z = c.v - static_cast<double>(n);
      if (t && !((z / *t).real() > 0.0))
        throw SectorError("needs Re(Z/t) > 0 for class (" + std::to_string(n) + ", " + label + ")", "t");
      ctx.classes.push_back({label, n, z, omega});
    }
  }
  return ctx;
}

CyTauSum oscillator_tau_sum_cy(const CyContext& ctx, cplx t, double hbar, int M, const QuadSettings& q) {
  require_finite(t, "t");
  if (!(hbar > 0.0)) throw ValidationError("hbar must be positive", "hbar");
  if (M < 1) throw ValidationError("truncation must be at least 1", "M");
  CyTauSum out{0.0, 0.0, 0.0};
  for (const auto& c : ctx.classes) {
    if (!((c.z / t).real() > 0.0))
      throw SectorError("needs Re(Z/t) > 0 for class (" + std::to_string(c.n) + ", " + c.label + ")", "t");
    double omega = to_double(c.omega);
    cplx partial = log_tau_frequency_sum(omega, c.z, t, M, q);
    cplx full = log_tau_frequency_sum(omega, c.z, t, kAllFrequencies, q);
    out.log_value += partial;
    out.frequency_tail += std::abs(full - partial);
    if (std::abs(c.n) == ctx.n_window) out.window_edge += std::abs(partial);
  }
  return out;
}

ResumCheck resum_check(cplx v, int genus, int n_window) {
  require_finite(v, "v");
  if (!(v.imag() > 0.0)) throw ValidationError("needs Im v > 0", "v");
  if (genus < 2) throw ValidationError("genus must be at least 2", "genus");
  if (n_window < 0) throw ValidationError("window must be nonnegative", "n_window");
  int power = 2 - 2 * genus;
  cplx lhs = 0.0;
  for (int n = n_window; n >= 1; --n)
    lhs += std::pow(v - static_cast<double>(n), power) + std::pow(v + static_cast<double>(n), power);
  lhs += std::pow(v, power);

  int k = 2 * genus - 3;
  cplx x = std::exp(kTwoPi * kI * v);
  double r = std::abs(x);
  cplx sum = 0.0;
  for (int d = 1;; ++d) {
    cplx term = std::pow(static_cast<double>(d), k) * std::pow(x, d);
    sum += term;
    double ratio = std::pow((d + 1.0) / d, k) * r;
    if (ratio < 1.0 && std::abs(term) * ratio / (1.0 - ratio) < 1e-12 * std::max(1.0, std::abs(sum))) break;
    if (d > 10000000) throw DivergenceError("geometric series did not settle", "v");
  }
  cplx rhs = std::pow(kTwoPi * kI, 2 * genus - 2) / std::tgamma(2.0 * genus - 2.0) * sum;
  return {lhs, rhs, std::abs(lhs - rhs)};
}

ResumCheck resum_check_extrapolated(cplx v, int genus, const std::vector<int>& windows) {
  check_windows(windows);
  std::vector<double> inv;
  std::vector<cplx> lhs;
  ResumCheck last{};
  for (int n : windows) {
    last = resum_check(v, genus, n);
    inv.push_back(1.0 / n);
    lhs.push_back(last.lhs);
  }
  cplx extrapolated = extrapolate_to_zero(inv, lhs);
  return {extrapolated, last.rhs, std::abs(extrapolated - last.rhs)};
}

std::vector<double> default_taus() {
  std::vector<double> taus;
  double tau = 0.1;
  for (int k = 0; k < 6; ++k, tau *= 0.8) taus.push_back(tau);
  return taus;
}

std::vector<cplx> even_taylor_coefficients(const std::vector<double>& taus, const std::vector<cplx>& values, int g_max) {
  size_t n = taus.size();
  if (n != values.size() || n < static_cast<size_t>(g_max - 1))
    throw ValidationError("need at least g_max - 1 samples", "tau");
  double xmax = 0.0;
  for (double tau : taus) xmax = std::max(xmax, tau * tau);
  // values / tau^2 = sum_j c_j x^j with x = tau^2, scaled to u = x / xmax
  std::vector<std::vector<cplx>> a(n, std::vector<cplx>(n));
  std::vector<cplx> b(n);
  for (size_t i = 0; i < n; ++i) {
    double x = taus[i] * taus[i];
    if (!(x > 0.0)) throw ValidationError("tau must be nonzero", "tau");
    double u = x / xmax, p = 1.0;
    for (size_t j = 0; j < n; ++j, p *= u) a[i][j] = p;
    b[i] = values[i] / x;
  }
  auto c = solve_dense(std::move(a), std::move(b));
  std::vector<cplx> out;
  for (int g = 2; g <= g_max; ++g) out.push_back(c[g - 2] / std::pow(xmax, g - 2));
  return out;
}

std::vector<CoefficientComparison> gv_upsilon_comparison(const CurveClass& c, const std::vector<int>& windows,
                                                         int g_max, const QuadSettings& q) {
  double omega = to_double(c.gv0);
  return compare_windowed(c, windows, g_max, [&](cplx z, cplx t) { return omega * upsilon_remainder(z / t, q); });
}

std::vector<CoefficientComparison> gv_tau_comparison(const CurveClass& c, const std::vector<int>& windows, int g_max,
                                                     const QuadSettings& q) {
  double omega = to_double(c.gv0);
  return compare_windowed(
      c, windows, g_max, [&](cplx z, cplx t) { return tau_frequency_remainder(omega, z, t, kAllFrequencies, q); });
}

}  // namespace bpsosc
