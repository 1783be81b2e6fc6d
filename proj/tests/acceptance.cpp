// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any criterion fails.
#include <CLI11.hpp>

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "bpsosc/frobenius.hpp"
#include "bpsosc/gv.hpp"
#include "bpsosc/largen_tau.hpp"
#include "bpsosc/oscillator.hpp"
#include "bpsosc/rh_solver.hpp"
#include "bpsosc/scenario.hpp"
#include "bpsosc/specfun.hpp"
#include "bpsosc/tasks.hpp"

using namespace bpsosc;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double n = x.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    double a = std::log(x[i]), b = std::log(y[i]);
    sx += a, sy += b, sxx += a * a, sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct StokesSet {
  int m;
  std::int64_t pairing;
  Rational omega;
  cplx z_gamma, z_beta;
  double hbar;
};

std::vector<StokesSet> stokes_sets() {
  std::mt19937_64 rng(20240607);
  std::uniform_int_distribution<int> m_d(1, 3), p_d(1, 3), num(1, 5), den(1, 4), sign(0, 1);
  std::uniform_real_distribution<double> mod(0.3, 2.0), ang(-kPi, kPi), frac(0.05, 1.0);
  std::vector<StokesSet> out;
  while (out.size() < 20) {
    StokesSet s;
    s.m = m_d(rng);
    s.pairing = p_d(rng) * (sign(rng) ? 1 : -1);
    s.omega = Rational(num(rng), den(rng)) * (sign(rng) ? 1 : -1);
    s.z_gamma = std::polar(mod(rng), ang(rng));
    s.z_beta = std::polar(mod(rng), ang(rng));
    double bound = 1.0 / (std::abs(to_double(s.omega)) * std::abs(static_cast<double>(s.pairing)));
    s.hbar = frac(rng) * bound;
    out.push_back(s);
  }
  return out;
}

SimpleOscillator make(const StokesSet& s) { return SimpleOscillator(s.m, s.pairing, s.omega, s.z_gamma, s.z_beta, s.hbar); }

// 2 i sinh(-(-1)^{m p} p i hbar Omega / 2)
cplx closed_form(const StokesSet& s) {
  double sign = (s.m * s.pairing) % 2 == 0 ? 1.0 : -1.0;
  cplx x = sign * static_cast<double>(s.pairing) * kI * s.hbar * to_double(s.omega);
  return 2.0 * kI * std::sinh(-x / 2.0);
}

Verdict criterion_stokes() {
  auto t0 = Clock::now();
  double worst = 0.0;
  for (const auto& s : stokes_sets()) {
    auto osc = make(s);
    auto num = stokes_numeric(osc);
    cplx expected = closed_form(s);
    worst = std::max(worst, std::abs(num.plus.a12 - expected) / std::abs(expected));
    worst = std::max(worst, std::abs(num.minus.a21 + expected) / std::abs(expected));
  }
  double dt = seconds_since(t0);
  return {worst <= 1e-6 && dt <= 60.0,
          "max rel error " + sci(worst) + " over 20 sets (S+12 and S-21), " + sci(dt) + " s"};
}

Verdict criterion_hypergeometric() {
  double worst = 0.0;
  for (const auto& s : stokes_sets()) {
    auto osc = make(s);
    cplx an = stokes_analytic(osc).plus.a12;
    worst = std::max(worst, std::abs(stokes_via_hypergeometric(osc).a12 - an) / std::abs(an));
  }
  double reflection = 0.0;
  for (int k = 1; k <= 9; ++k) {
    double a = 0.1 * k;
    cplx g = std::exp(log_gamma(1.0 - a) + log_gamma(1.0 + a));
    reflection = std::max(reflection, std::abs(g * std::sin(kPi * a) / (kPi * a) - 1.0));
  }
  return {worst <= 1e-12 && reflection <= 1e-10,
          "max rel |hypergeometric - analytic| " + sci(worst) + ", reflection defect " + sci(reflection)};
}

Verdict criterion_hbar_order(const Scenario& fixture) {
  const auto& ob = *fixture.oscillator;
  BpsStructure st = fixture.structure();
  const cplx t = std::polar(0.3, kPi / 4);
  std::vector<double> hs{0.2, 0.1, 0.05, 0.025}, full, rest, diag;
  for (double h : hs) {
    auto osc = SimpleOscillator::from_structure(st, ob.gamma, ob.beta, 1, h);
    auto p = picard_solve(osc, t);
    auto l = matrix_log(p);
    full.push_back((p - ComplexMatrix2::identity()).max_abs());
    rest.push_back((p - first_order_psi(osc, t)).max_abs());
    diag.push_back(std::max(std::abs(l.a11), std::abs(l.a22)));
  }
  double a = loglog_slope(hs, full), b = loglog_slope(hs, rest), c = loglog_slope(hs, diag);
  return {a >= 0.95 && b >= 1.9 && c >= 1.9,
          "orders: |Psi - I| " + sci(a) + ", |Psi - first order| " + sci(b) + ", diag log Psi " + sci(c)};
}

const std::vector<int> kTruncations{50, 100, 200, 400};

Verdict criterion_large_n(const Scenario& fixture) {
  auto t0 = Clock::now();
  BpsStructure st = fixture.structure();
  const Charge gamma{1, 0};
  const int j = 1;
  auto r = psi_limit(st, j, cplx(1, 0), 0.05, kTruncations);
  double expected = static_cast<double>(pairing(st.form(), Charge{0, 1}, gamma)) * to_double(st.omega(gamma)) *
                    (1.0 - 0.5 * std::log(kTwoPi));
  double target_err = std::abs(r.target - expected);
  double err = std::abs(r.extrapolated - expected);
  double dt = seconds_since(t0);
  bool ok = err <= 1e-6 && target_err <= 1e-12 && std::abs(r.fitted_order - 1.0) <= 0.1 && dt <= 30.0;
  return {ok, "extrapolated error " + sci(err) + ", raw slope -" + sci(r.fitted_order) + ", " + sci(dt) + " s"};
}

Verdict criterion_binet() {
  double worst = 0.0;
  for (cplx z : {cplx(1, 0), cplx(2, 0), cplx(1, 0.5)}) {
    auto r = binet_bridge(z, kTruncations);
    worst = std::max(worst, std::abs(r.extrapolated - binet_term(z)));
  }
  return {worst <= 1e-6, "max extrapolated error " + sci(worst) + " at Z/t in {1, 2, 1+0.5i}"};
}

Verdict criterion_tau(const Scenario& fixture) {
  BpsStructure st = fixture.structure();
  const Charge gamma{1, 0};
  const cplx t(1, 0);
  auto g = tau_limit(st, gamma, t, 0.05, kTruncations, 1e-4);
  double grad_err = g.extrapolated_error;
  double ratio = std::abs(g.extrapolated) / std::abs(g.target);
  auto r1 = tau_equation_residual(st, t, 0.05, 400, 1e-4);
  auto r2 = tau_equation_residual(st, t, 0.025, 400, 5e-5);
  double res1 = *std::max_element(r1.residual.begin(), r1.residual.end());
  double res2 = *std::max_element(r2.residual.begin(), r2.residual.end());
  bool ok = grad_err <= 1e-5 && res1 <= 1e-3 && res2 < res1;
  return {ok, "gradient error " + sci(grad_err) + " (|sum|/|target| " + sci(ratio) + "), residual " + sci(res1) +
                  " at hbar 0.05, " + sci(res2) + " at hbar 0.025"};
}

struct RandomUncoupled {
  BpsStructure s;
  std::vector<Charge> delta;
};

RandomUncoupled random_uncoupled(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> rank_d(2, 4), entry(-2, 2), coord(-2, 2), size_d(1, 8), dirs_d(1, 3), mult(1, 3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (;;) {
    int rank = rank_d(rng);
    std::vector<std::vector<std::int64_t>> m(rank, std::vector<std::int64_t>(rank, 0));
    for (int i = 0; i < rank; ++i)
      for (int k = i + 1; k < rank; ++k) m[i][k] = entry(rng), m[k][i] = -m[i][k];
    SkewForm form(m);
    int wanted = dirs_d(rng);
    std::vector<Charge> dirs;
    for (int tries = 0; tries < 200 && static_cast<int>(dirs.size()) < wanted; ++tries) {
      Charge g(rank);
      for (auto& x : g) x = coord(rng);
      if (is_zero(g)) continue;
      g = primitive_direction(g);
      bool ok = true;
      for (const auto& d : dirs) ok = ok && d != g && pairing(form, d, g) == 0;
      if (ok) dirs.push_back(g);
    }
    if (dirs.empty()) continue;
    Spectrum sp;
    for (const auto& g : dirs) sp[g] = Rational(mult(rng), mult(rng));
    std::vector<cplx> z(rank);
    for (auto& x : z) x = cplx(u(rng), u(rng));
    std::set<Charge> d;
    int n = size_d(rng);
    while (static_cast<int>(d.size()) < n) {
      Charge c(rank);
      for (auto& x : c) x = coord(rng);
      d.insert(c);
    }
    BpsStructure s(form, z, symmetrize(sp));
    if (!is_uncoupled(s)) continue;
    return {s, {d.begin(), d.end()}};
  }
}

Verdict criterion_flatness() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(77);
  int flat = 0, single_direction = 0, single_flat = 0;
  std::string first_counterexample;
  for (int i = 0; i < 50; ++i) {
    auto smp = random_uncoupled(rng);
    auto r = check_frobenius_axioms(smp.s, smp.delta);
    std::set<Charge> dirs;
    for (const auto& a : smp.s.active()) dirs.insert(primitive_direction(a));
    bool single = dirs.size() == 1;
    single_direction += single;
    single_flat += single && r.flat;
    if (r.flat) {
      ++flat;
    } else if (first_counterexample.empty()) {
      first_counterexample = "sample " + std::to_string(i) + ", " + std::to_string(dirs.size()) + " active directions: " +
                             r.witness;
    }
  }
  auto w = coupled_witness();
  bool witness_curved = !check_frobenius_axioms(w.form, w.z, w.f, w.delta).flat;
  double dt = seconds_since(t0);
  std::string detail = std::to_string(flat) + "/50 random uncoupled samples flat (" + std::to_string(single_flat) + "/" +
                       std::to_string(single_direction) + " with one active direction), coupled witness " +
                       (witness_curved ? "curved" : "flat") + ", " + sci(dt) + " s";
  if (!first_counterexample.empty()) detail += "; first curved sample " + first_counterexample;
  return {flat == 50 && witness_curved && dt <= 10.0, detail};
}

Verdict criterion_gv() {
  const CurveClass beta{1, cplx(0.3, 0.4)};
  const int chi = 3;
  auto series = gv_series(chi, {{"beta", beta}}, 3);
  const auto& c2 = series.coefficients.front();
  bool exact = c2.genus == 2 && c2.constant_map == Rational(1, 5760) && c2.curve_terms.size() == 1 &&
               c2.curve_terms[0].prefactor == Rational(1, 240) && c2.curve_terms[0].polylog_order == -1;
  cplx x = std::exp(kTwoPi * kI * beta.v);
  cplx value = chi / 5760.0 + x / ((1.0 - x) * (1.0 - x)) / 240.0;
  double value_err = std::abs(series.series.coefficient(2) - value) / std::abs(value);

  auto rc = resum_check_extrapolated(beta.v, 2, {250, 500, 1000, 2000});
  double resum_err = std::abs(rc.lhs - kPi * kPi / std::pow(std::sin(kPi * beta.v), 2));

  const std::vector<int> windows{50, 100, 200, 400};
  double tau_err = 0.0, ups_err = 0.0;
  for (const auto& c : gv_tau_comparison(beta, windows, 3)) tau_err = std::max(tau_err, c.rel_error);
  for (const auto& c : gv_upsilon_comparison(beta, windows, 3)) ups_err = std::max(ups_err, c.rel_error);
  bool ok = exact && value_err <= 1e-14 && resum_err <= 1e-8 && tau_err <= 1e-3;
  return {ok, std::string("lambda^2 prefactors ") + (exact ? "exact" : "WRONG") + ", value rel error " + sci(value_err) +
                  ", resum error " + sci(resum_err) + ", tau comparison g=2,3 rel error " + sci(tau_err) +
                  " (Upsilon channel " + sci(ups_err) + ")"};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Verdict criterion_determinism(const std::string& cli, const fs::path& scenarios) {
  fs::path root = fs::temp_directory_path() / ("bpsosc_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  int compared = 0;
  std::vector<std::string> problems;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(scenarios))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& sc : files) {
    std::string hash = load_scenario(sc.string()).hash;
    for (const auto& task : task_names()) {
      std::string csv[2];
      for (int k = 0; k < 2; ++k) {
        int threads = k == 0 ? 1 : 8;
        fs::path out = root / std::to_string(threads);
        std::string cmd = "'" + cli + "' --scenario '" + sc.string() + "' --out '" + out.string() + "' --task " + task +
                          " --threads " + std::to_string(threads) + " >/dev/null 2>&1";
        int status = std::system(cmd.c_str());
        if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
          problems.push_back(sc.filename().string() + "/" + task + " exit " + std::to_string(WEXITSTATUS(status)));
          continue;
        }
        csv[k] = slurp(out / (task + "-" + hash + ".csv"));
      }
      if (csv[0].empty() || csv[0] != csv[1]) {
        problems.push_back(sc.filename().string() + "/" + task + " differs");
      } else {
        ++compared;
      }
    }
  }
  fs::remove_all(root);
  std::string detail = std::to_string(compared) + " task/scenario pairs byte-identical for threads 1 and 8";
  for (const auto& p : problems) detail += "; " + p;
  return {problems.empty() && compared > 0, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string cli, scenarios;
  app.add_option("--cli", cli, "bpsosc executable")->required();
  app.add_option("--scenarios", scenarios, "fixture scenario directory")->required();
  CLI11_PARSE(app, argc, argv);

  Scenario fixture = load_scenario((fs::path(scenarios) / "double_a1.json").string());
  std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"Stokes closed form", criterion_stokes},
      {"hypergeometric dictionary", criterion_hypergeometric},
      {"hbar-order structure", [&] { return criterion_hbar_order(fixture); }},
      {"large-N limit", [&] { return criterion_large_n(fixture); }},
      {"Binet bridge", criterion_binet},
      {"tau function", [&] { return criterion_tau(fixture); }},
      {"flatness characterisation", criterion_flatness},
      {"GV coefficients", criterion_gv},
      {"determinism", [&] { return criterion_determinism(cli, scenarios); }}};

  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS " : "FAIL ") << i + 1 << " " << criteria[i].first << ": " << v.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
