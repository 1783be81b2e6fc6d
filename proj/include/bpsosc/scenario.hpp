#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bpsosc/bps_core.hpp"
#include "bpsosc/gv.hpp"
#include "bpsosc/quadrature.hpp"

namespace bpsosc {

inline constexpr int kScenarioSchemaVersion = 1;

struct OscillatorBlock {
  Charge gamma, beta;
  std::vector<int> frequencies;
};

struct FrobeniusBlock {
  std::vector<std::vector<Charge>> subsets;
  int random_subsets = 0;
  int oscillator_size = 4;
};

struct LargeNBlock {
  std::vector<int> basis_indices;
  std::optional<cplx> ray;
  std::vector<cplx> binet_points;
};

struct RhBlock {
  std::vector<cplx> t;  // evaluation points, off the rays of Z(gamma)
};

struct TauBlock {
  double step = 1e-4;
};

struct GvTauSumBlock {
  cplx t;
  int n_window = 4;
  double hbar = 0.1;
  int truncation = 400;
};

struct GvBlock {
  int chi = 0;
  int g_max = 3;
  int compare_genus = 3;
  CurveClassTable curves;
  std::map<std::string, Rational> omega;
  std::vector<int> windows;
  std::vector<int> resum_windows;
  GvTauSumBlock tau_sum;
};

// A fully resolved scenario. Every value not given in the file is filled in and its path is
// listed in defaults_applied.
struct Scenario {
  nlohmann::json source;
  std::string hash;  // FNV-1a 64 of the canonical dump, 16 hex digits
  std::string name;
  std::vector<std::string> basis_labels;
  SkewForm form;
  std::vector<cplx> z;
  Spectrum spectrum;  // symmetrised
  double support_constant = 0.0;
  std::vector<double> hbar;
  std::vector<cplx> t_grid;
  std::vector<int> truncations;
  QuadSettings quad;
  std::string quad_source;  // "scenario", "env:<profile>" or "builtin"
  std::uint64_t seed = 0;
  std::optional<OscillatorBlock> oscillator;
  FrobeniusBlock frobenius;
  RhBlock rh;
  LargeNBlock large_n;
  TauBlock tau;
  GvBlock gv;
  std::vector<std::string> defaults_applied;

  int rank() const { return form.rank(); }
  BpsStructure structure() const;
  nlohmann::json resolved() const;
};

std::string fnv1a_hex(const std::string& bytes);

Scenario parse_scenario(const nlohmann::json& doc, std::optional<std::uint64_t> seed_override = std::nullopt);
Scenario load_scenario(const std::string& path, std::optional<std::uint64_t> seed_override = std::nullopt);

nlohmann::json complex_json(cplx z);

}  // namespace bpsosc
