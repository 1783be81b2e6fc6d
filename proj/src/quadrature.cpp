#include "bpsosc/quadrature.hpp"

#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include <boost/math/special_functions/legendre.hpp>

namespace bpsosc {

QuadSettings quad_profile(const std::string& name) {
  if (name == "accurate") return QuadSettings{};
  if (name == "fast") return QuadSettings{4.0, 32, 40.0};
  throw ValidationError("unknown quadrature profile \"" + name + "\" (fast|accurate)", "BPSOSC_QUAD_PROFILE");
}

QuadSettings default_quad() {
  const char* env = std::getenv("BPSOSC_QUAD_PROFILE");
  if (env == nullptr || *env == '\0') return QuadSettings{};
  return quad_profile(env);
}

void validate(const QuadSettings& q) {
  if (!(q.panel_width > 0)) throw ValidationError("panel width must be positive", "quadrature.panel_width");
  if (q.nodes_per_panel < 2 || q.nodes_per_panel > 256)
    throw ValidationError("nodes per panel must lie in [2, 256]", "quadrature.nodes_per_panel");
  if (!(q.cutoff > 0)) throw ValidationError("cutoff must be positive", "quadrature.cutoff");
}

namespace {

Rule build_gauss_legendre(int n) {
  // Boost returns the nonnegative zeros in increasing order.
  std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
  Rule half;
  for (double x : zeros) {
    double dp = boost::math::legendre_p_prime(n, x);
    half.nodes.push_back(x);
    half.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  }
  Rule r;
  for (size_t k = half.nodes.size(); k-- > 0;) {
    if (half.nodes[k] == 0.0) continue;
    r.nodes.push_back(-half.nodes[k]);
    r.weights.push_back(half.weights[k]);
  }
  for (size_t k = 0; k < half.nodes.size(); ++k) {
    r.nodes.push_back(half.nodes[k]);
    r.weights.push_back(half.weights[k]);
  }
  return r;
}

std::mutex cache_mutex;

}  // namespace

const Rule& gauss_legendre(int n) {
  static std::map<int, std::unique_ptr<Rule>> cache;
  if (n < 1) throw ValidationError("Gauss-Legendre order must be positive", "nodes_per_panel");
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Rule>(build_gauss_legendre(n));
  return *slot;
}

const Rule& half_line_rule(const QuadSettings& q) {
  static std::map<std::tuple<double, int, double>, std::unique_ptr<Rule>> cache;
  validate(q);
  const Rule& gl = gauss_legendre(q.nodes_per_panel);
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto& slot = cache[{q.panel_width, q.nodes_per_panel, q.cutoff}];
  if (!slot) {
    auto r = std::make_unique<Rule>();
    int panels = static_cast<int>(std::ceil(q.cutoff / q.panel_width - 1e-12));
    double h = q.cutoff / panels;
    for (int p = 0; p < panels; ++p) {
      double mid = h * (p + 0.5);
      for (size_t k = 0; k < gl.nodes.size(); ++k) {
        r->nodes.push_back(mid + 0.5 * h * gl.nodes[k]);
        r->weights.push_back(0.5 * h * gl.weights[k]);
      }
    }
    slot = std::move(r);
  }
  return *slot;
}

const Rule& graded_half_line_rule(const QuadSettings& q, int levels) {
  static std::map<std::tuple<double, int, double, int>, std::unique_ptr<Rule>> cache;
  if (levels < 0 || levels > 60) throw ValidationError("grading levels must lie in [0, 60]", "quadrature.levels");
  const Rule& base = half_line_rule(q);
  const Rule& gl = gauss_legendre(q.nodes_per_panel);
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto& slot = cache[{q.panel_width, q.nodes_per_panel, q.cutoff, levels}];
  if (!slot) {
    auto r = std::make_unique<Rule>();
    int panels = static_cast<int>(std::ceil(q.cutoff / q.panel_width - 1e-12));
    double first = q.cutoff / panels;
    auto add_panel = [&](double a, double b) {
      for (size_t k = 0; k < gl.nodes.size(); ++k) {
        r->nodes.push_back(0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[k]);
        r->weights.push_back(0.5 * (b - a) * gl.weights[k]);
      }
    };
    double lo = std::ldexp(first, -levels);
    add_panel(0.0, lo);
    for (int j = levels; j >= 1; --j) add_panel(std::ldexp(first, -j), std::ldexp(first, -j + 1));
    size_t skip = gl.nodes.size();
    for (size_t k = skip; k < base.nodes.size(); ++k) {
      r->nodes.push_back(base.nodes[k]);
      r->weights.push_back(base.weights[k]);
    }
    slot = std::move(r);
  }
  return *slot;
}

}  // namespace bpsosc
