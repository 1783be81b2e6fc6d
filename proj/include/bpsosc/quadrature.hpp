#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "bpsosc/common.hpp"

namespace bpsosc {

struct QuadSettings {
  double panel_width = 2.0;
  int nodes_per_panel = 64;
  double cutoff = 40.0;
};

// Defaults, overridden by BPSOSC_QUAD_PROFILE=fast|accurate when set.
QuadSettings default_quad();
QuadSettings quad_profile(const std::string& name);
void validate(const QuadSettings& q);

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre on [-1, 1]; cached, safe for concurrent use.
const Rule& gauss_legendre(int n);

// Composite Gauss-Legendre on [0, cutoff]; nodes strictly increasing.
const Rule& half_line_rule(const QuadSettings& q);

// As half_line_rule, with the first panel split dyadically towards 0 over the given number of levels.
const Rule& graded_half_line_rule(const QuadSettings& q, int levels);

// Composite rule on the straight segment [a, b] with panels no longer than width.
template <class F>
cplx integrate_segment(F&& f, cplx a, cplx b, int n = 64, double width = 2.0) {
  const Rule& gl = gauss_legendre(n);
  double len = std::abs(b - a);
  int panels = std::max(1, static_cast<int>(std::ceil(len / width)));
  cplx h = (b - a) / static_cast<double>(panels);
  cplx total = 0.0;
  for (int p = 0; p < panels; ++p) {
    cplx mid = a + h * (p + 0.5);
    cplx acc = 0.0;
    for (size_t k = 0; k < gl.nodes.size(); ++k) acc += gl.weights[k] * f(mid + 0.5 * h * gl.nodes[k]);
    total += 0.5 * h * acc;
  }
  return total;
}

// int_0^inf f(s) e^{-rate s} ds via u = rate s on the half-line rule.
template <class F>
cplx integrate_exp(F&& f, double rate, const QuadSettings& q) {
  const Rule& r = half_line_rule(q);
  cplx acc = 0.0;
  for (size_t k = 0; k < r.nodes.size(); ++k) {
    double u = r.nodes[k];
    acc += r.weights[k] * std::exp(-u) * f(u / rate);
  }
  return acc / rate;
}

// int_0^inf f(s) ds for integrands already carrying their own decay.
template <class F>
cplx integrate_half_line(F&& f, const QuadSettings& q) {
  const Rule& r = half_line_rule(q);
  cplx acc = 0.0;
  for (size_t k = 0; k < r.nodes.size(); ++k) acc += r.weights[k] * f(r.nodes[k]);
  return acc;
}

}  // namespace bpsosc
