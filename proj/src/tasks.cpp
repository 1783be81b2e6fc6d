#include "bpsosc/tasks.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "bpsosc/frobenius.hpp"
#include "bpsosc/gv.hpp"
#include "bpsosc/largen_tau.hpp"
#include "bpsosc/oscillator.hpp"
#include "bpsosc/rh_solver.hpp"

namespace bpsosc {

using nlohmann::json;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
  return buf;
}
std::string fmt(std::int64_t x) { return std::to_string(x); }
std::string fmt(int x) { return std::to_string(x); }
std::string fmt(bool x) { return x ? "true" : "false"; }

std::string csv_quote(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void Table::add(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw Error("row width " + std::to_string(row.size()) + " does not match the header");
  rows.push_back(std::move(row));
}

std::string Table::csv() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += csv_quote(cells[i]);
    }
    out += '\n';
  };
  line(columns);
  for (const auto& r : rows) line(r);
  return out;
}

namespace {

using Rows = std::vector<std::vector<std::string>>;

std::string bare_message(const Error& e) {
  std::string w = e.what();
  if (!e.field().empty() && w.rfind(e.field() + ": ", 0) == 0) return w.substr(e.field().size() + 2);
  return w;
}

// Runs f and re-labels library errors with the scenario path of the grid point.
template <class F>
auto at_field(const std::string& path, F&& f) -> decltype(f()) {
  auto msg = [](const Error& e) {
    return e.field().empty() ? bare_message(e) : bare_message(e) + " [" + e.field() + "]";
  };
  try {
    return f();
  } catch (const ValidationError& e) {
    throw ValidationError(msg(e), path);
  } catch (const DivergenceError& e) {
    throw DivergenceError(msg(e), path);
  } catch (const SectorError& e) {
    throw SectorError(msg(e), path);
  }
}

std::string indexed(const std::string& key, size_t i) { return key + "[" + std::to_string(i) + "]"; }

std::vector<std::string> cplx_cells(cplx z) { return {fmt(z.real()), fmt(z.imag())}; }

void append(std::vector<std::string>& row, const std::vector<std::string>& more) {
  row.insert(row.end(), more.begin(), more.end());
}

const OscillatorBlock& need_oscillator(const Scenario& sc) {
  if (!sc.oscillator) throw ValidationError("no oscillator given and no active class pairs with a basis vector", "oscillator");
  return *sc.oscillator;
}

std::string charges_string(const std::vector<Charge>& d) {
  std::string out;
  for (const auto& c : d) out += (out.empty() ? "" : " ") + to_string(c);
  return out;
}

TaskOutput check_structure(const Scenario& sc, int) {
  BpsStructure st = sc.structure();
  TaskOutput out;
  out.table.columns = {"class", "omega", "dt", "z_re", "z_im", "ray_angle"};
  std::map<Charge, double> angle;
  json rays = json::array();
  for (const auto& ray : active_rays(st)) {
    json cl = json::array();
    for (const auto& c : ray.classes) angle[c] = ray.angle, cl.push_back(to_string(c));
    rays.push_back({{"angle", ray.angle}, {"direction", complex_json(ray.direction)}, {"classes", cl}});
  }
  for (const auto& g : st.active()) {
    std::vector<std::string> row{to_string(g), rational_string(st.omega(g)), rational_string(dt_spectrum(st, g))};
    append(row, cplx_cells(st.central_charge(g)));
    row.push_back(fmt(angle.at(g)));
    out.table.add(std::move(row));
  }
  bool uncoupled = is_uncoupled(st);
  out.detail = {{"uncoupled", uncoupled},
                {"rank", st.rank()},
                {"active_classes", out.table.rows.size()},
                {"rays", rays}};
  out.summary = {std::string("uncoupled: ") + (uncoupled ? "true" : "false"),
                 "active classes: " + std::to_string(out.table.rows.size()),
                 "active rays: " + std::to_string(rays.size())};
  return out;
}

std::vector<Charge> random_subset(int rank, std::uint64_t seed, int index) {
  std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(index + 1));
  std::uniform_int_distribution<int> size_d(1, 8), coord(-2, 2);
  int n = size_d(rng);
  std::set<Charge> d;
  while (static_cast<int>(d.size()) < n) {
    Charge c(rank);
    for (auto& x : c) x = coord(rng);
    if (!is_zero(c)) d.insert(c);
  }
  return {d.begin(), d.end()};
}

TaskOutput frobenius_audit(const Scenario& sc, int threads) {
  BpsStructure st = sc.structure();
  struct Job {
    std::string source, path;
    std::vector<Charge> delta;
  };
  std::vector<Job> jobs;
  for (size_t i = 0; i < sc.frobenius.subsets.size(); ++i)
    jobs.push_back({"given", indexed("frobenius.subsets", i), sc.frobenius.subsets[i]});
  if (sc.oscillator)
    jobs.push_back({"oscillator", "oscillator",
                    oscillator_subset(sc.oscillator->gamma, sc.oscillator->beta, sc.frobenius.oscillator_size, sc.form)});
  for (int i = 0; i < sc.frobenius.random_subsets; ++i)
    jobs.push_back({"random", "frobenius.random_subsets", random_subset(sc.rank(), sc.seed, i)});
  jobs.push_back({"coupled_witness", "", {}});

  auto reports = parallel_map(jobs.size(), threads, [&](size_t k) {
    const Job& j = jobs[k];
    if (j.source == "coupled_witness") {
      auto w = coupled_witness();
      return std::make_pair(w.delta, check_frobenius_axioms(w.form, w.z, w.f, w.delta));
    }
    for (const auto& c : j.delta)
      if (static_cast<int>(c.size()) != sc.rank()) throw ValidationError("charge must have rank entries", j.path);
    return std::make_pair(j.delta, at_field(j.path, [&] { return check_frobenius_axioms(st, j.delta); }));
  });

  TaskOutput out;
  out.table.columns = {"source", "index", "size", "flat", "commutes", "v_skew", "u_linear", "subset", "witness"};
  std::map<std::string, int> counter, flat;
  json rows = json::array();
  for (size_t k = 0; k < jobs.size(); ++k) {
    const auto& [delta, r] = reports[k];
    int idx = counter[jobs[k].source]++;
    flat[jobs[k].source] += r.flat ? 1 : 0;
    out.table.add({jobs[k].source, fmt(idx), fmt(static_cast<int>(delta.size())), fmt(r.flat), fmt(r.commutes),
                   fmt(r.v_skew), fmt(r.u_linear), charges_string(delta), r.witness});
    rows.push_back({{"source", jobs[k].source}, {"index", idx}, {"subset", charges_string(delta)}, {"flat", r.flat},
                    {"commutes", r.commutes}, {"v_skew", r.v_skew}, {"u_linear", r.u_linear}, {"witness", r.witness}});
  }
  bool uncoupled = is_uncoupled(st);
  out.detail = {{"uncoupled", uncoupled}, {"seed", sc.seed}, {"rows", rows}};
  out.summary.push_back(std::string("uncoupled: ") + (uncoupled ? "true" : "false"));
  for (const auto& [source, n] : counter)
    out.summary.push_back(source + ": " + std::to_string(flat[source]) + "/" + std::to_string(n) + " flat");
  return out;
}

TaskOutput stokes(const Scenario& sc, int threads) {
  const auto& ob = need_oscillator(sc);
  BpsStructure st = sc.structure();
  std::vector<std::pair<size_t, int>> grid;
  for (size_t h = 0; h < sc.hbar.size(); ++h)
    for (int m : ob.frequencies) grid.emplace_back(h, m);

  auto rows = parallel_map(grid.size(), threads, [&](size_t k) {
    auto [h, m] = grid[k];
    return at_field(indexed("hbar", h), [&] {
      auto osc = SimpleOscillator::from_structure(st, ob.gamma, ob.beta, m, sc.hbar[h]);
      auto an = stokes_analytic(osc);
      auto num = stokes_numeric(osc);
      auto hyp = stokes_via_hypergeometric(osc);
      double scale = std::max(std::abs(an.plus.a12), std::abs(an.minus.a21));
      double num_err = std::max(std::abs(num.plus.a12 - an.plus.a12), std::abs(num.minus.a21 - an.minus.a21)) / scale;
      double hyp_err = std::abs(hyp.a12 - an.plus.a12) / std::abs(an.plus.a12);
      std::vector<std::string> row{fmt(m), fmt(sc.hbar[h]), fmt(osc.coupling())};
      for (cplx z : {an.plus.a12, num.plus.a12, hyp.a12, an.minus.a21, num.minus.a21}) append(row, cplx_cells(z));
      append(row, {fmt(num_err), fmt(hyp_err), fmt(num.accuracy)});
      return row;
    });
  });

  TaskOutput out;
  out.table.columns = {"m",
                       "hbar",
                       "coupling",
                       "analytic_plus12_re",
                       "analytic_plus12_im",
                       "numeric_plus12_re",
                       "numeric_plus12_im",
                       "hypergeometric_plus12_re",
                       "hypergeometric_plus12_im",
                       "analytic_minus21_re",
                       "analytic_minus21_im",
                       "numeric_minus21_re",
                       "numeric_minus21_im",
                       "numeric_rel_error",
                       "hypergeometric_rel_error",
                       "numeric_triangularity"};
  double worst = 0.0;
  for (auto& r : rows) {
    worst = std::max(worst, std::stod(r[13]));
    out.table.add(std::move(r));
  }
  out.detail = {{"gamma", ob.gamma}, {"beta", ob.beta}, {"pairing", pairing(sc.form, ob.gamma, ob.beta)},
                {"max_numeric_rel_error", worst}};
  out.summary = {"rows: " + std::to_string(out.table.rows.size()), "max numeric rel error: " + fmt(worst)};
  return out;
}

TaskOutput rh_solve(const Scenario& sc, int threads) {
  const auto& ob = need_oscillator(sc);
  BpsStructure st = sc.structure();
  std::vector<std::pair<size_t, int>> grid;
  for (size_t h = 0; h < sc.hbar.size(); ++h)
    for (int m : ob.frequencies) grid.emplace_back(h, m);

  auto blocks = parallel_map(grid.size(), threads, [&](size_t k) {
    auto [h, m] = grid[k];
    auto osc = SimpleOscillator::from_structure(st, ob.gamma, ob.beta, m, sc.hbar[h]);
    for (size_t i = 0; i < sc.rh.t.size(); ++i)
      at_field(indexed("rh.t", i), [&] { return check_off_rays(osc.z_gamma(), sc.rh.t[i]); });
    RhSolution sol = at_field(indexed("hbar", h), [&] { return RhSolution(osc, 200, 1e-14, sc.quad); });
    Rows rows;
    for (size_t i = 0; i < sc.rh.t.size(); ++i) {
      cplx t = sc.rh.t[i];
      rows.push_back(at_field(indexed("rh.t", i), [&] {
        RayCheck rc = check_off_rays(osc.z_gamma(), t);
        ComplexMatrix2 psi = sol.at(t);
        ComplexMatrix2 ode = fundamental_solution(osc, t).psi;
        ComplexMatrix2 first = first_order_psi(osc, t, sc.quad);
        std::vector<std::string> row{fmt(m), fmt(sc.hbar[h])};
        append(row, cplx_cells(t));
        for (cplx z : {psi.a11, psi.a12, psi.a21, psi.a22}) append(row, cplx_cells(z));
        append(row, {fmt(sol.iterations()), fmt(sol.contraction()), fmt((psi - ode).max_abs()),
                     fmt((psi - first).max_abs()), fmt(rc.distance), rc.warning});
        return row;
      }));
    }
    return rows;
  });

  TaskOutput out;
  out.table.columns = {"m",          "hbar",       "t_re",       "t_im",        "psi11_re",
                       "psi11_im",   "psi12_re",   "psi12_im",   "psi21_re",    "psi21_im",
                       "psi22_re",   "psi22_im",   "iterations", "contraction", "ode_difference",
                       "first_order_difference",   "ray_distance", "warning"};
  double worst = 0.0;
  json warnings = json::array();
  for (auto& block : blocks)
    for (auto& r : block) {
      worst = std::max(worst, std::stod(r[14]));
      if (!r.back().empty()) warnings.push_back(r.back());
      out.table.add(std::move(r));
    }
  out.detail = {{"gamma", ob.gamma}, {"beta", ob.beta}, {"max_ode_difference", worst}, {"warnings", warnings}};
  out.summary = {"rows: " + std::to_string(out.table.rows.size()), "max |Picard - ODE|: " + fmt(worst)};
  return out;
}

json report_json(const LimitReport& r) {
  json partials = json::array();
  for (auto p : r.partials) partials.push_back(complex_json(p));
  return {{"truncations", r.truncations}, {"partials", partials},
          {"target", complex_json(r.target)}, {"abs_error", r.abs_error},
          {"fitted_order", r.fitted_order},   {"extrapolated", complex_json(r.extrapolated)},
          {"extrapolated_error", r.extrapolated_error}};
}

LimitOptions limit_options(const Scenario& sc) { return LimitOptions{sc.large_n.ray, sc.quad}; }

json family_json(const Scenario& sc, const BpsStructure& st, cplx t) {
  cplx ray = sc.large_n.ray.value_or(t / std::abs(t));
  json fam = json::array();
  double margin = 1.0;
  for (const auto& g : half_plane_family(st, ray)) {
    cplx w = g.z / t;
    margin = std::min(margin, w.real() / std::abs(w));
    fam.push_back({{"class", to_string(g.gamma)}, {"z", complex_json(g.z)}, {"omega", g.omega}});
  }
  return {{"t", complex_json(t)}, {"ray", complex_json(ray)}, {"family", fam}, {"sector_margin", margin}};
}

TaskOutput large_n(const Scenario& sc, int threads) {
  BpsStructure st = sc.structure();
  auto o = limit_options(sc);
  struct Point {
    size_t t, h;
    int j;
  };
  std::vector<Point> grid;
  for (size_t t = 0; t < sc.t_grid.size(); ++t)
    for (size_t h = 0; h < sc.hbar.size(); ++h)
      for (int j : sc.large_n.basis_indices) grid.push_back({t, h, j});

  json sectors = json::array();
  for (size_t t = 0; t < sc.t_grid.size(); ++t)
    sectors.push_back(at_field(indexed("t", t), [&] { return family_json(sc, st, sc.t_grid[t]); }));

  auto reports = parallel_map(grid.size(), threads, [&](size_t k) {
    const Point& p = grid[k];
    return at_field(indexed("t", p.t), [&] {
      cplx t = sc.t_grid[p.t];
      for (const auto& g : half_plane_family(st, o.ray.value_or(t / std::abs(t))))
        if (!((g.z / t).real() > 0.0)) throw SectorError("Re(Z/t) <= 0 for class " + to_string(g.gamma), "t");
      return psi_limit(st, p.j, t, sc.hbar[p.h], sc.truncations, o);
    });
  });
  auto bridges = parallel_map(sc.large_n.binet_points.size(), threads, [&](size_t k) {
    return at_field(indexed("large_n.binet_points", k),
                    [&] { return binet_bridge(sc.large_n.binet_points[k], sc.truncations, sc.quad); });
  });

  TaskOutput out;
  out.table.columns = {"t_re",       "t_im",       "hbar",      "j",         "M",
                       "partial_re", "partial_im", "target_re", "target_im", "abs_error",
                       "fitted_order", "extrapolated_re", "extrapolated_im", "extrapolated_error"};
  json rows = json::array();
  double worst = 0.0;
  for (size_t k = 0; k < grid.size(); ++k) {
    const auto& r = reports[k];
    for (size_t i = 0; i < r.truncations.size(); ++i) {
      std::vector<std::string> row = cplx_cells(sc.t_grid[grid[k].t]);
      append(row, {fmt(sc.hbar[grid[k].h]), fmt(grid[k].j), fmt(r.truncations[i])});
      append(row, cplx_cells(r.partials[i]));
      append(row, cplx_cells(r.target));
      row.push_back(fmt(std::abs(r.partials[i] - r.target)));
      row.push_back(fmt(r.fitted_order));
      append(row, cplx_cells(r.extrapolated));
      row.push_back(fmt(r.extrapolated_error));
      out.table.add(std::move(row));
    }
    worst = std::max(worst, r.extrapolated_error);
    json rj = report_json(r);
    rj["t"] = complex_json(sc.t_grid[grid[k].t]);
    rj["hbar"] = sc.hbar[grid[k].h];
    rj["j"] = grid[k].j;
    rows.push_back(rj);
  }
  json binet = json::array();
  for (size_t k = 0; k < bridges.size(); ++k) {
    json b = report_json(bridges[k]);
    b["z"] = complex_json(sc.large_n.binet_points[k]);
    binet.push_back(b);
  }
  out.detail = {{"sectors", sectors}, {"reports", rows}, {"binet_bridge", binet}};
  out.summary = {"reports: " + std::to_string(rows.size()), "max extrapolated error: " + fmt(worst)};
  return out;
}

TaskOutput tau(const Scenario& sc, int threads) {
  BpsStructure st = sc.structure();
  auto o = limit_options(sc);
  struct Point {
    size_t t, h;
    std::optional<FamilyMember> member;  // empty: residual of the tau equation
  };
  std::vector<Point> grid;
  for (size_t t = 0; t < sc.t_grid.size(); ++t) {
    cplx tv = sc.t_grid[t];
    auto fam = at_field(indexed("t", t), [&] { return half_plane_family(st, o.ray.value_or(tv / std::abs(tv))); });
    for (size_t h = 0; h < sc.hbar.size(); ++h) {
      for (const auto& g : fam) grid.push_back({t, h, g});
      grid.push_back({t, h, std::nullopt});
    }
  }
  int M = sc.truncations.back();
  auto pieces = parallel_map(grid.size(), threads, [&](size_t k) {
    const Point& p = grid[k];
    cplx t = sc.t_grid[p.t];
    double hbar = sc.hbar[p.h];
    return at_field(indexed("t", p.t), [&] {
      Rows rows;
      std::vector<std::string> head = {"", fmt(t.real()), fmt(t.imag()), fmt(hbar)};
      if (p.member) {
        auto r = tau_limit(st, p.member->gamma, t, hbar, sc.truncations, sc.tau.step, o);
        for (size_t i = 0; i <= r.truncations.size(); ++i) {
          bool last = i == r.truncations.size();
          auto row = head;
          row[0] = last ? "gradient_extrapolated" : "gradient";
          row.push_back(to_string(p.member->gamma));
          row.push_back(last ? "inf" : fmt(r.truncations[i]));
          cplx v = last ? r.extrapolated : r.partials[i];
          append(row, cplx_cells(v));
          append(row, cplx_cells(r.target));
          row.push_back(fmt(std::abs(v - r.target)));
          row.push_back(fmt(r.fitted_order));
          rows.push_back(std::move(row));
        }
      } else {
        auto r = tau_equation_residual(st, t, hbar, M, sc.tau.step, o);
        for (size_t j = 0; j < r.lhs.size(); ++j) {
          auto row = head;
          row[0] = "residual";
          row.push_back(fmt(static_cast<int>(j)));
          row.push_back(fmt(M));
          append(row, cplx_cells(r.lhs[j]));
          append(row, cplx_cells(r.rhs[j]));
          row.push_back(fmt(r.residual[j]));
          row.push_back("");
          rows.push_back(std::move(row));
        }
      }
      return rows;
    });
  });

  TaskOutput out;
  out.table.columns = {"kind",     "t_re",     "t_im",      "hbar",      "item",  "M",
                       "value_re", "value_im", "target_re", "target_im", "error", "fitted_order"};
  double worst_gradient = 0.0, worst_residual = 0.0;
  json rows = json::array();
  for (auto& piece : pieces)
    for (auto& r : piece) {
      double e = std::stod(r[10]);
      if (r[0] == "gradient_extrapolated") worst_gradient = std::max(worst_gradient, e);
      if (r[0] == "residual") worst_residual = std::max(worst_residual, e);
      out.table.add(std::move(r));
    }
  out.detail = {{"step", sc.tau.step},
                {"residual_truncation", M},
                {"max_gradient_error", worst_gradient},
                {"max_residual", worst_residual}};
  out.summary = {"max extrapolated gradient error: " + fmt(worst_gradient), "max residual: " + fmt(worst_residual)};
  return out;
}

json series_json(const FormalSeries& s) {
  json c = json::object();
  for (const auto& [k, v] : s.coefficients()) c[std::to_string(k)] = complex_json(v);
  return {{"variable", s.variable()}, {"truncation", s.truncation()}, {"coefficients", c}};
}

TaskOutput gv_compare(const Scenario& sc, int threads) {
  const auto& g = sc.gv;
  GvSeries series = at_field("gv", [&] { return gv_series(g.chi, g.curves, g.g_max); });

  struct Piece {
    Rows rows;
    json detail;
  };
  std::vector<std::function<Piece()>> jobs;
  auto comparison_rows = [](const char* kind, const std::string& label, const std::vector<CoefficientComparison>& cs) {
    Piece p;
    p.detail = json::array();
    for (const auto& c : cs) {
      for (size_t i = 0; i <= c.windows.size(); ++i) {
        bool last = i == c.windows.size();
        cplx v = last ? c.extrapolated : c.per_window[i];
        std::vector<std::string> row{kind, label, fmt(c.genus), last ? "extrapolated" : fmt(c.windows[i])};
        append(row, cplx_cells(v));
        append(row, cplx_cells(c.expected));
        row.push_back(fmt(std::abs(v - c.expected) / std::abs(c.expected)));
        p.rows.push_back(std::move(row));
      }
      json pw = json::array();
      for (auto v : c.per_window) pw.push_back(complex_json(v));
      p.detail.push_back({{"genus", c.genus}, {"windows", c.windows}, {"per_window", pw},
                          {"extrapolated", complex_json(c.extrapolated)}, {"expected", complex_json(c.expected)},
                          {"rel_error", c.rel_error}});
    }
    return p;
  };
  for (const auto& [label, c] : g.curves) {
    std::string path = "gv.curve_classes." + label;
    jobs.push_back([&, label = label, c = c, path] {
      Piece p;
      p.detail = json::array();
      for (int genus = 2; genus <= g.compare_genus; ++genus) {
        auto r = at_field(path, [&] { return resum_check_extrapolated(c.v, genus, g.resum_windows); });
        std::vector<std::string> row{"resum", label, fmt(genus), fmt(g.resum_windows.back())};
        append(row, cplx_cells(r.lhs));
        append(row, cplx_cells(r.rhs));
        row.push_back(fmt(r.error / std::abs(r.rhs)));
        p.rows.push_back(std::move(row));
        p.detail.push_back({{"genus", genus}, {"lhs", complex_json(r.lhs)}, {"rhs", complex_json(r.rhs)},
                            {"error", r.error}});
      }
      return p;
    });
    jobs.push_back([&, label = label, c = c, path] {
      return comparison_rows("upsilon", label,
                             at_field(path, [&] { return gv_upsilon_comparison(c, g.windows, g.compare_genus, sc.quad); }));
    });
    jobs.push_back([&, label = label, c = c, path] {
      return comparison_rows("tau", label,
                             at_field(path, [&] { return gv_tau_comparison(c, g.windows, g.compare_genus, sc.quad); }));
    });
  }
  jobs.push_back([&] {
    auto s = at_field("gv.tau_sum", [&] {
      auto ctx = cy_bps_structure(g.curves, g.tau_sum.n_window, g.omega, g.tau_sum.t);
      return oscillator_tau_sum_cy(ctx, g.tau_sum.t, g.tau_sum.hbar, g.tau_sum.truncation, sc.quad);
    });
    Piece p;
    std::vector<std::string> row{"cy_tau_sum", "", "", fmt(g.tau_sum.n_window)};
    append(row, cplx_cells(s.log_value));
    append(row, {"", "", ""});
    p.rows.push_back(std::move(row));
    p.detail = {{"t", complex_json(g.tau_sum.t)},
                {"n_window", g.tau_sum.n_window},
                {"hbar", g.tau_sum.hbar},
                {"truncation", g.tau_sum.truncation},
                {"log_value", complex_json(s.log_value)},
                {"frequency_tail", s.frequency_tail},
                {"window_edge", s.window_edge}};
    return p;
  });
  auto pieces = parallel_map(jobs.size(), threads, [&](size_t k) { return jobs[k](); });

  TaskOutput out;
  out.table.columns = {"kind",        "label",       "genus",       "window",   "value_re",
                       "value_im",    "expected_re", "expected_im", "rel_error"};
  json prefactors = json::array();
  for (const auto& c : series.coefficients) {
    cplx v = series.series.coefficient(2 * c.genus - 2);
    std::vector<std::string> row{"series", "", fmt(c.genus), ""};
    append(row, cplx_cells(v));
    append(row, {"", "", ""});
    out.table.add(std::move(row));
    json terms = json::array();
    for (const auto& t : c.curve_terms)
      terms.push_back({{"label", t.label}, {"prefactor", rational_string(t.prefactor)},
                       {"polylog_order", t.polylog_order}, {"x", complex_json(t.x)}, {"value", complex_json(t.value())}});
    prefactors.push_back({{"genus", c.genus}, {"constant_map", rational_string(c.constant_map)}, {"curve_terms", terms}});
    out.summary.push_back("lambda^" + std::to_string(2 * c.genus - 2) + ": " + std::to_string(g.chi) + " * " +
                          rational_string(c.constant_map) +
                          (c.curve_terms.empty() ? "" : " + curve terms") + " = " + fmt(v.real()) + " + " +
                          fmt(v.imag()) + "i");
  }
  json resum = json::object(), ups = json::object(), taus = json::object();
  size_t k = 0;
  for (const auto& [label, c] : g.curves) {
    (void)c;
    resum[label] = pieces[k].detail;
    ups[label] = pieces[k + 1].detail;
    taus[label] = pieces[k + 2].detail;
    k += 3;
  }
  for (auto& p : pieces)
    for (auto& r : p.rows) {
      if (r[0] == "upsilon" || r[0] == "tau")
        if (r[3] == "extrapolated") out.summary.push_back(r[0] + " " + r[1] + " genus " + r[2] + " rel error " + r[8]);
      out.table.add(std::move(r));
    }
  out.detail = {{"series", series_json(series.series)},
                {"series_in_t", series_json(series.series.substitute_scaled("t", kTwoPi))},
                {"chi", g.chi},
                {"prefactors", prefactors},
                {"resum", resum},
                {"upsilon", ups},
                {"tau", taus},
                {"cy_tau_sum", pieces.back().detail}};
  return out;
}

using TaskFn = TaskOutput (*)(const Scenario&, int);

const std::map<std::string, TaskFn>& registry() {
  static const std::map<std::string, TaskFn> r{{"check-structure", check_structure},
                                              {"frobenius-audit", frobenius_audit},
                                              {"stokes", stokes},
                                              {"rh-solve", rh_solve},
                                              {"large-n", large_n},
                                              {"tau", tau},
                                              {"gv-compare", gv_compare}};
  return r;
}

std::string error_type(const Error& e) {
  if (dynamic_cast<const ValidationError*>(&e)) return "validation";
  if (dynamic_cast<const DivergenceError*>(&e)) return "divergence";
  if (dynamic_cast<const SectorError*>(&e)) return "sector";
  return "error";
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  f << content;
  if (!f) throw ValidationError("cannot write " + p.string(), "out");
}

}  // namespace

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names{"check-structure", "frobenius-audit", "stokes", "rh-solve",
                                              "large-n",         "tau",             "gv-compare"};
  return names;
}

TaskOutput run_task(const std::string& task, const Scenario& sc, int threads) {
  auto it = registry().find(task);
  if (it == registry().end()) throw ValidationError("unknown task " + task, "task");
  return it->second(sc, threads);
}

RunResult run(const RunOptions& opt) {
  namespace fs = std::filesystem;
  RunResult res;
  Scenario sc;
  try {
    if (!registry().count(opt.task)) throw ValidationError("unknown task " + opt.task, "task");
    if (opt.threads < 1 || opt.threads > 256) throw ValidationError("must lie in [1, 256]", "threads");
    sc = load_scenario(opt.scenario_path, opt.seed);
    std::error_code ec;
    fs::create_directories(opt.out_dir, ec);
    if (ec) throw ValidationError("cannot create output directory: " + ec.message(), "out");
  } catch (const Error& e) {
    res.exit_code = e.exit_code();
    res.error = e.what();
    return res;
  }
  res.hash = sc.hash;
  fs::path base = fs::path(opt.out_dir) / (opt.task + "-" + sc.hash);

  json manifest;
  manifest["tool"] = "bpsosc";
  manifest["version"] = kVersion;
  manifest["task"] = opt.task;
  manifest["scenario"] = {{"path", opt.scenario_path}, {"hash", sc.hash}, {"name", sc.name}};
  manifest["threads"] = opt.threads;
  manifest["seed"] = sc.seed;
  manifest["seed_source"] = opt.seed ? "command line" : "scenario or default";
  const char* profile = std::getenv("BPSOSC_QUAD_PROFILE");
  manifest["environment"] = {{"BPSOSC_QUAD_PROFILE", profile ? json(profile) : json(nullptr)}};
  manifest["resolved"] = sc.resolved();
  manifest["defaults_applied"] = sc.defaults_applied;

  try {
    TaskOutput out = run_task(opt.task, sc, opt.threads);
    fs::path csv = base.string() + ".csv", js = base.string() + ".json";
    write_file(csv, out.table.csv());
    json doc{{"task", opt.task}, {"scenario_hash", sc.hash}, {"columns", out.table.columns}, {"result", out.detail}};
    write_file(js, doc.dump(2) + "\n");
    res.outputs = {csv.string(), js.string()};
    res.summary = out.summary;
  } catch (const Error& e) {
    res.exit_code = e.exit_code();
    res.error = e.what();
    manifest["error"] = {{"type", error_type(e)}, {"field", e.field()}, {"message", bare_message(e)}};
  } catch (const std::exception& e) {
    res.exit_code = 1;
    res.error = e.what();
    manifest["error"] = {{"type", "internal"}, {"field", ""}, {"message", e.what()}};
  }
  fs::path mpath = base.string() + ".manifest.json";
  manifest["outputs"] = res.outputs;
  manifest["status"] = res.exit_code == 0 ? "ok" : "error";
  manifest["exit_code"] = res.exit_code;
  try {
    write_file(mpath, manifest.dump(2) + "\n");
    res.outputs.push_back(mpath.string());
  } catch (const Error& e) {
    if (res.exit_code == 0) res.exit_code = e.exit_code(), res.error = e.what();
  }
  return res;
}

}  // namespace bpsosc
