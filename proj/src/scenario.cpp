#include "bpsosc/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

#include "bpsosc/frobenius.hpp"

namespace bpsosc {

using nlohmann::json;

namespace {

const json* member(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ValidationError("expected an object", path);
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!ok.count(it.key())) throw ValidationError("unknown key", path.empty() ? it.key() : path + "." + it.key());
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, size_t i) { return path + "[" + std::to_string(i) + "]"; }

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ValidationError("expected a number", path);
  double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError("non-finite number", path);
  return x;
}

std::int64_t as_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ValidationError("expected an integer", path);
  return v.get<std::int64_t>();
}

cplx as_complex(const json& v, const std::string& path) {
  if (v.is_object()) {
    check_keys(v, path, {"polar"});
    const json& p = v.at("polar");
    if (!p.is_array() || p.size() != 2) throw ValidationError("polar form is [modulus, angle]", join(path, "polar"));
    return std::polar(as_number(p[0], join(path, "polar") + "[0]"), as_number(p[1], join(path, "polar") + "[1]"));
  }
  if (!v.is_array() || v.size() != 2) throw ValidationError("complex numbers are [re, im]", path);
  return {as_number(v[0], index(path, 0)), as_number(v[1], index(path, 1))};
}

Rational as_rational(const json& v, const std::string& path) {
  if (!v.is_string()) throw ValidationError("rationals are strings \"p/q\"", path);
  return parse_rational(v.get<std::string>(), path);
}

const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ValidationError("expected an array", path);
  return v;
}

Charge as_charge(const json& v, int rank, const std::string& path) {
  as_array(v, path);
  if (static_cast<int>(v.size()) != rank) throw ValidationError("charge must have rank entries", path);
  Charge c;
  for (size_t i = 0; i < v.size(); ++i) c.push_back(as_integer(v[i], index(path, i)));
  return c;
}

std::vector<int> as_int_list(const json& v, const std::string& path, int min_value) {
  as_array(v, path);
  std::vector<int> out;
  for (size_t i = 0; i < v.size(); ++i) {
    auto x = as_integer(v[i], index(path, i));
    if (x < min_value || x > 100000000) throw ValidationError("integer out of range", index(path, i));
    out.push_back(static_cast<int>(x));
  }
  return out;
}

void check_increasing(const std::vector<int>& xs, const std::string& path, size_t min_size) {
  if (xs.size() < min_size) throw ValidationError("needs at least " + std::to_string(min_size) + " entries", path);
  for (size_t i = 1; i < xs.size(); ++i)
    if (xs[i] <= xs[i - 1]) throw ValidationError("entries must increase", index(path, i));
}

class Resolver {
 public:
  explicit Resolver(std::vector<std::string>& log) : log_(log) {}
  // Returns the member or nullptr, recording the path when the default will be used.
  const json* get(const json* obj, const std::string& path, const char* key) {
    const json* v = obj ? member(*obj, key) : nullptr;
    if (!v) log_.push_back(join(path, key));
    return v;
  }

 private:
  std::vector<std::string>& log_;
};

std::vector<int> default_truncations() { return {50, 100, 200, 400}; }

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

BpsStructure Scenario::structure() const { return BpsStructure(form, z, spectrum, support_constant); }

Scenario parse_scenario(const json& doc, std::optional<std::uint64_t> seed_override) {
  check_keys(doc, "",
             {"schema_version", "name", "rank", "basis_labels", "pairing", "central_charges", "spectrum",
              "support_constant", "hbar", "t", "truncations", "quadrature", "seed", "oscillator", "frobenius", "rh", "large_n",
              "tau", "gv"});
  Scenario sc;
  sc.source = doc;
  sc.hash = fnv1a_hex(doc.dump());
  Resolver r(sc.defaults_applied);

  const json* ver = member(doc, "schema_version");
  if (!ver) throw ValidationError("missing", "schema_version");
  if (as_integer(*ver, "schema_version") != kScenarioSchemaVersion)
    throw ValidationError("unsupported schema version", "schema_version");

  const json* name = r.get(&doc, "", "name");
  if (name && !name->is_string()) throw ValidationError("expected a string", "name");
  sc.name = name ? name->get<std::string>() : "scenario";

  const json* rank_v = member(doc, "rank");
  if (!rank_v) throw ValidationError("missing", "rank");
  auto rank = as_integer(*rank_v, "rank");
  if (rank < 1 || rank > 64) throw ValidationError("rank must lie in [1, 64]", "rank");
  int n = static_cast<int>(rank);

  if (const json* labels = r.get(&doc, "", "basis_labels")) {
    as_array(*labels, "basis_labels");
    if (static_cast<int>(labels->size()) != n) throw ValidationError("one label per basis vector", "basis_labels");
    for (size_t i = 0; i < labels->size(); ++i) {
      if (!(*labels)[i].is_string()) throw ValidationError("expected a string", index("basis_labels", i));
      sc.basis_labels.push_back((*labels)[i].get<std::string>());
    }
  } else {
    for (int i = 0; i < n; ++i) sc.basis_labels.push_back("e" + std::to_string(i));
  }

  const json* pairing_v = member(doc, "pairing");
  if (!pairing_v) throw ValidationError("missing", "pairing");
  as_array(*pairing_v, "pairing");
  if (static_cast<int>(pairing_v->size()) != n) throw ValidationError("pairing must be rank x rank", "pairing");
  std::vector<std::vector<std::int64_t>> m;
  for (size_t i = 0; i < pairing_v->size(); ++i) {
    const json& row = as_array((*pairing_v)[i], index("pairing", i));
    if (static_cast<int>(row.size()) != n) throw ValidationError("pairing must be rank x rank", index("pairing", i));
    std::vector<std::int64_t> out;
    for (size_t k = 0; k < row.size(); ++k) out.push_back(as_integer(row[k], index(index("pairing", i), k)));
    m.push_back(std::move(out));
  }
  try {
    sc.form = SkewForm(m);
  } catch (const Error& e) {
    throw ValidationError(e.what(), "pairing");
  }

  const json* zs = member(doc, "central_charges");
  if (!zs) throw ValidationError("missing", "central_charges");
  as_array(*zs, "central_charges");
  if (static_cast<int>(zs->size()) != n) throw ValidationError("one central charge per basis vector", "central_charges");
  for (size_t i = 0; i < zs->size(); ++i) sc.z.push_back(as_complex((*zs)[i], index("central_charges", i)));

  Spectrum raw;
  if (const json* spec = r.get(&doc, "", "spectrum")) {
    as_array(*spec, "spectrum");
    for (size_t i = 0; i < spec->size(); ++i) {
      std::string path = index("spectrum", i);
      const json& e = (*spec)[i];
      check_keys(e, path, {"class", "omega"});
      if (!member(e, "class") || !member(e, "omega")) throw ValidationError("entries need class and omega", path);
      Charge c = as_charge(e.at("class"), n, join(path, "class"));
      if (raw.count(c)) throw ValidationError("duplicate class", join(path, "class"));
      raw[c] = as_rational(e.at("omega"), join(path, "omega"));
    }
  }
  try {
    sc.spectrum = symmetrize(raw);
  } catch (const Error& e) {
    throw ValidationError(e.what(), "spectrum");
  }

  if (const json* c = r.get(&doc, "", "support_constant")) {
    sc.support_constant = as_number(*c, "support_constant");
    if (sc.support_constant < 0) throw ValidationError("must be nonnegative", "support_constant");
  }
  try {
    (void)sc.structure();
  } catch (const Error& e) {
    throw ValidationError(e.what(), e.field().empty() ? "spectrum" : e.field());
  }

  if (const json* h = r.get(&doc, "", "hbar")) {
    as_array(*h, "hbar");
    for (size_t i = 0; i < h->size(); ++i) {
      double x = as_number((*h)[i], index("hbar", i));
      if (!(x > 0.0)) throw ValidationError("hbar must be positive", index("hbar", i));
      sc.hbar.push_back(x);
    }
    if (sc.hbar.empty()) throw ValidationError("needs at least one value", "hbar");
  } else {
    sc.hbar = {0.2, 0.1, 0.05, 0.025};
  }

  if (const json* ts = r.get(&doc, "", "t")) {
    as_array(*ts, "t");
    for (size_t i = 0; i < ts->size(); ++i) {
      cplx t = as_complex((*ts)[i], index("t", i));
      if (t == 0.0) throw ValidationError("t must be nonzero", index("t", i));
      sc.t_grid.push_back(t);
    }
    if (sc.t_grid.empty()) throw ValidationError("needs at least one point", "t");
  } else {
    sc.t_grid = {cplx(1.0, 0.0)};
  }

  if (const json* ms = r.get(&doc, "", "truncations")) {
    sc.truncations = as_int_list(*ms, "truncations", 1);
    check_increasing(sc.truncations, "truncations", 4);
  } else {
    sc.truncations = default_truncations();
  }

  if (const json* q = member(doc, "quadrature")) {
    check_keys(*q, "quadrature", {"panel_width", "nodes_per_panel", "cutoff"});
    QuadSettings base = default_quad();
    sc.quad = base;
    if (const json* w = r.get(q, "quadrature", "panel_width")) sc.quad.panel_width = as_number(*w, "quadrature.panel_width");
    if (const json* k = r.get(q, "quadrature", "nodes_per_panel"))
      sc.quad.nodes_per_panel = static_cast<int>(as_integer(*k, "quadrature.nodes_per_panel"));
    if (const json* c = r.get(q, "quadrature", "cutoff")) sc.quad.cutoff = as_number(*c, "quadrature.cutoff");
    sc.quad_source = "scenario";
  } else {
    sc.defaults_applied.push_back("quadrature");
    sc.quad = default_quad();
    const char* env = std::getenv("BPSOSC_QUAD_PROFILE");
    sc.quad_source = env && *env ? std::string("env:") + env : "builtin";
  }
  try {
    validate(sc.quad);
  } catch (const Error& e) {
    throw ValidationError(e.what(), "quadrature");
  }

  if (seed_override) {
    sc.seed = *seed_override;
  } else if (const json* s = r.get(&doc, "", "seed")) {
    if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<std::int64_t>() >= 0))
      throw ValidationError("seed must be a nonnegative integer", "seed");
    sc.seed = s->get<std::uint64_t>();
  }

  // oscillator block: explicit or the first positive active class with a pairing partner in the basis
  BpsStructure st = sc.structure();
  if (const json* o = member(doc, "oscillator")) {
    check_keys(*o, "oscillator", {"gamma", "beta", "m"});
    if (!member(*o, "gamma") || !member(*o, "beta")) throw ValidationError("needs gamma and beta", "oscillator");
    OscillatorBlock b;
    b.gamma = as_charge(o->at("gamma"), n, "oscillator.gamma");
    b.beta = as_charge(o->at("beta"), n, "oscillator.beta");
    if (pairing(sc.form, b.gamma, b.beta) == 0) throw ValidationError("<gamma, beta> must be nonzero", "oscillator.beta");
    if (st.omega(b.gamma) == 0) throw ValidationError("gamma must be active", "oscillator.gamma");
    if (const json* ms = r.get(o, "oscillator", "m")) {
      b.frequencies = as_int_list(*ms, "oscillator.m", 1);
      if (b.frequencies.empty()) throw ValidationError("needs at least one frequency", "oscillator.m");
    } else {
      b.frequencies = {1};
    }
    sc.oscillator = b;
  } else {
    for (const auto& g : st.active()) {
      if (primitive_direction(g) != g) continue;
      for (int k = 0; k < n && !sc.oscillator; ++k) {
        Charge e(n, 0);
        e[k] = 1;
        if (pairing(sc.form, g, e) != 0) sc.oscillator = OscillatorBlock{g, e, {1}};
      }
      if (sc.oscillator) break;
    }
    sc.defaults_applied.push_back("oscillator");
  }

  const json* fb = member(doc, "frobenius");
  if (fb) check_keys(*fb, "frobenius", {"subsets", "random_subsets", "oscillator_size"});
  if (!fb) sc.defaults_applied.push_back("frobenius");
  if (const json* subs = fb ? r.get(fb, "frobenius", "subsets") : nullptr) {
    as_array(*subs, "frobenius.subsets");
    for (size_t i = 0; i < subs->size(); ++i) {
      std::string path = index("frobenius.subsets", i);
      std::vector<Charge> delta;
      const json& d = as_array((*subs)[i], path);
      for (size_t k = 0; k < d.size(); ++k) delta.push_back(as_charge(d[k], n, index(path, k)));
      if (delta.empty()) throw ValidationError("subset must be nonempty", path);
      sc.frobenius.subsets.push_back(std::move(delta));
    }
  }
  if (const json* rs = fb ? r.get(fb, "frobenius", "random_subsets") : nullptr) {
    auto k = as_integer(*rs, "frobenius.random_subsets");
    if (k < 0 || k > 10000) throw ValidationError("must lie in [0, 10000]", "frobenius.random_subsets");
    sc.frobenius.random_subsets = static_cast<int>(k);
  }
  if (const json* os = fb ? r.get(fb, "frobenius", "oscillator_size") : nullptr) {
    auto k = as_integer(*os, "frobenius.oscillator_size");
    if (k < 2 || k % 2 != 0 || k > 16) throw ValidationError("must be even and in [2, 16]", "frobenius.oscillator_size");
    sc.frobenius.oscillator_size = static_cast<int>(k);
  }

  const json* rb = member(doc, "rh");
  if (rb) check_keys(*rb, "rh", {"t"});
  if (!rb) sc.defaults_applied.push_back("rh");
  if (const json* ts = rb ? r.get(rb, "rh", "t") : nullptr) {
    as_array(*ts, "rh.t");
    for (size_t i = 0; i < ts->size(); ++i) {
      cplx t = as_complex((*ts)[i], index("rh.t", i));
      if (t == 0.0) throw ValidationError("t must be nonzero", index("rh.t", i));
      sc.rh.t.push_back(t);
    }
    if (sc.rh.t.empty()) throw ValidationError("needs at least one point", "rh.t");
  } else {
    sc.rh.t = sc.t_grid;
  }

  const json* ln = member(doc, "large_n");
  if (ln) check_keys(*ln, "large_n", {"basis_indices", "ray", "binet_points"});
  if (!ln) sc.defaults_applied.push_back("large_n");
  if (const json* bi = ln ? r.get(ln, "large_n", "basis_indices") : nullptr) {
    sc.large_n.basis_indices = as_int_list(*bi, "large_n.basis_indices", 0);
    for (size_t i = 0; i < sc.large_n.basis_indices.size(); ++i)
      if (sc.large_n.basis_indices[i] >= n) throw ValidationError("basis index out of range", index("large_n.basis_indices", i));
  } else {
    for (int i = 0; i < n; ++i) sc.large_n.basis_indices.push_back(i);
  }
  if (const json* ray = ln ? r.get(ln, "large_n", "ray") : nullptr) {
    sc.large_n.ray = as_complex(*ray, "large_n.ray");
    if (*sc.large_n.ray == 0.0) throw ValidationError("ray must be nonzero", "large_n.ray");
  }
  if (const json* bp = ln ? r.get(ln, "large_n", "binet_points") : nullptr) {
    as_array(*bp, "large_n.binet_points");
    for (size_t i = 0; i < bp->size(); ++i) {
      cplx z = as_complex((*bp)[i], index("large_n.binet_points", i));
      if (!(z.real() > 0.0)) throw ValidationError("needs Re z > 0", index("large_n.binet_points", i));
      sc.large_n.binet_points.push_back(z);
    }
  } else {
    sc.large_n.binet_points = {cplx(1, 0), cplx(2, 0), cplx(1, 0.5)};
  }

  const json* tb = member(doc, "tau");
  if (tb) check_keys(*tb, "tau", {"step"});
  if (!tb) sc.defaults_applied.push_back("tau");
  if (const json* h = tb ? r.get(tb, "tau", "step") : nullptr) {
    sc.tau.step = as_number(*h, "tau.step");
    if (!(sc.tau.step > 0.0 && sc.tau.step < 0.1)) throw ValidationError("must lie in (0, 0.1)", "tau.step");
  }

  const json* gb = member(doc, "gv");
  if (gb) check_keys(*gb, "gv", {"chi", "g_max", "compare_genus", "curve_classes", "windows", "resum_windows", "tau_sum"});
  if (!gb) sc.defaults_applied.push_back("gv");
  auto& gv = sc.gv;
  if (const json* c = gb ? r.get(gb, "gv", "chi") : nullptr) gv.chi = static_cast<int>(as_integer(*c, "gv.chi"));
  if (const json* g = gb ? r.get(gb, "gv", "g_max") : nullptr) {
    gv.g_max = static_cast<int>(as_integer(*g, "gv.g_max"));
    if (gv.g_max < 2 || gv.g_max > kMaxGenus) throw ValidationError("must lie in [2, 16]", "gv.g_max");
  }
  if (const json* g = gb ? r.get(gb, "gv", "compare_genus") : nullptr) {
    gv.compare_genus = static_cast<int>(as_integer(*g, "gv.compare_genus"));
    if (gv.compare_genus < 2 || gv.compare_genus > 6) throw ValidationError("must lie in [2, 6]", "gv.compare_genus");
  }
  gv.compare_genus = std::min(gv.compare_genus, gv.g_max);
  if (const json* cc = gb ? r.get(gb, "gv", "curve_classes") : nullptr) {
    as_array(*cc, "gv.curve_classes");
    for (size_t i = 0; i < cc->size(); ++i) {
      std::string path = index("gv.curve_classes", i);
      const json& e = (*cc)[i];
      check_keys(e, path, {"label", "gv0", "v", "omega"});
      if (!member(e, "label") || !member(e, "gv0") || !member(e, "v")) throw ValidationError("needs label, gv0 and v", path);
      if (!e.at("label").is_string()) throw ValidationError("expected a string", join(path, "label"));
      std::string label = e.at("label").get<std::string>();
      if (gv.curves.count(label)) throw ValidationError("duplicate label", join(path, "label"));
      CurveClass c{as_rational(e.at("gv0"), join(path, "gv0")), as_complex(e.at("v"), join(path, "v"))};
      if (!(c.v.imag() > 0.0)) throw ValidationError("needs Im v > 0", join(path, "v"));
      gv.curves[label] = c;
      if (const json* om = r.get(&e, path, "omega"))
        gv.omega[label] = as_rational(*om, join(path, "omega"));
      else
        gv.omega[label] = c.gv0;
    }
  }
  if (const json* w = gb ? r.get(gb, "gv", "windows") : nullptr) {
    gv.windows = as_int_list(*w, "gv.windows", 1);
    check_increasing(gv.windows, "gv.windows", 2);
  } else {
    gv.windows = {50, 100, 200, 400};
  }
  if (const json* w = gb ? r.get(gb, "gv", "resum_windows") : nullptr) {
    gv.resum_windows = as_int_list(*w, "gv.resum_windows", 1);
    check_increasing(gv.resum_windows, "gv.resum_windows", 2);
  } else {
    gv.resum_windows = {250, 500, 1000, 2000};
  }
  gv.tau_sum.t = cplx(0.0, 0.3);
  const json* ts = gb ? member(*gb, "tau_sum") : nullptr;
  if (ts) check_keys(*ts, "gv.tau_sum", {"t", "n_window", "hbar", "truncation"});
  if (gb && !ts) sc.defaults_applied.push_back("gv.tau_sum");
  if (const json* t = ts ? r.get(ts, "gv.tau_sum", "t") : nullptr) gv.tau_sum.t = as_complex(*t, "gv.tau_sum.t");
  if (const json* k = ts ? r.get(ts, "gv.tau_sum", "n_window") : nullptr) {
    auto v = as_integer(*k, "gv.tau_sum.n_window");
    if (v < 0 || v > 100000) throw ValidationError("must lie in [0, 100000]", "gv.tau_sum.n_window");
    gv.tau_sum.n_window = static_cast<int>(v);
  }
  if (const json* h = ts ? r.get(ts, "gv.tau_sum", "hbar") : nullptr) {
    gv.tau_sum.hbar = as_number(*h, "gv.tau_sum.hbar");
    if (!(gv.tau_sum.hbar > 0.0)) throw ValidationError("must be positive", "gv.tau_sum.hbar");
  }
  if (const json* m = ts ? r.get(ts, "gv.tau_sum", "truncation") : nullptr) {
    auto v = as_integer(*m, "gv.tau_sum.truncation");
    if (v < 1 || v > 1000000) throw ValidationError("must lie in [1, 1000000]", "gv.tau_sum.truncation");
    gv.tau_sum.truncation = static_cast<int>(v);
  }
  return sc;
}

Scenario load_scenario(const std::string& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file " + path, "scenario");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what(), "scenario");
  }
  return parse_scenario(doc, seed_override);
}

namespace {

json charge_json(const Charge& c) { return json(c); }

}  // namespace

json Scenario::resolved() const {
  json j;
  j["schema_version"] = kScenarioSchemaVersion;
  j["name"] = name;
  j["rank"] = rank();
  j["basis_labels"] = basis_labels;
  j["pairing"] = form.matrix();
  json zs = json::array();
  for (auto v : z) zs.push_back(complex_json(v));
  j["central_charges"] = zs;
  json sp = json::array();
  for (const auto& [c, w] : spectrum) sp.push_back({{"class", charge_json(c)}, {"omega", rational_string(w)}});
  j["spectrum"] = sp;
  j["support_constant"] = support_constant;
  j["hbar"] = hbar;
  json ts = json::array();
  for (auto t : t_grid) ts.push_back(complex_json(t));
  j["t"] = ts;
  j["truncations"] = truncations;
  j["quadrature"] = {{"panel_width", quad.panel_width}, {"nodes_per_panel", quad.nodes_per_panel},
                     {"cutoff", quad.cutoff}, {"source", quad_source}};
  j["seed"] = seed;
  if (oscillator)
    j["oscillator"] = {{"gamma", charge_json(oscillator->gamma)},
                       {"beta", charge_json(oscillator->beta)},
                       {"m", oscillator->frequencies}};
  else
    j["oscillator"] = nullptr;
  json subs = json::array();
  for (const auto& d : frobenius.subsets) {
    json dj = json::array();
    for (const auto& c : d) dj.push_back(charge_json(c));
    subs.push_back(dj);
  }
  j["frobenius"] = {{"subsets", subs},
                    {"random_subsets", frobenius.random_subsets},
                    {"oscillator_size", frobenius.oscillator_size}};
  json rts = json::array();
  for (auto t : rh.t) rts.push_back(complex_json(t));
  j["rh"] = {{"t", rts}};
  json bp = json::array();
  for (auto p : large_n.binet_points) bp.push_back(complex_json(p));
  j["large_n"] = {{"basis_indices", large_n.basis_indices},
                  {"ray", large_n.ray ? complex_json(*large_n.ray) : json("direction of t")},
                  {"binet_points", bp}};
  j["tau"] = {{"step", tau.step}};
  json cc = json::array();
  for (const auto& [label, c] : gv.curves)
    cc.push_back({{"label", label}, {"gv0", rational_string(c.gv0)}, {"v", complex_json(c.v)},
                  {"omega", rational_string(gv.omega.at(label))}});
  j["gv"] = {{"chi", gv.chi},
             {"g_max", gv.g_max},
             {"compare_genus", gv.compare_genus},
             {"curve_classes", cc},
             {"windows", gv.windows},
             {"resum_windows", gv.resum_windows},
             {"tau_sum",
              {{"t", complex_json(gv.tau_sum.t)},
               {"n_window", gv.tau_sum.n_window},
               {"hbar", gv.tau_sum.hbar},
               {"truncation", gv.tau_sum.truncation}}}};
  return j;
}

}  // namespace bpsosc
