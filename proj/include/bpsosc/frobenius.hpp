#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bpsosc/bps_core.hpp"

namespace bpsosc {

// Exact coefficients below are stored as multiples of (2 pi i)^{-1} for one-forms and the values f,
// and of (2 pi i)^{-2} for two-forms and products of two one-forms.
using FMap = std::map<Charge, GaussRational>;

// Divide by the gcd and make the first nonzero coordinate positive.
Charge primitive_direction(const Charge& a);

struct SymbolicOneForm {
  std::map<Charge, GaussRational> terms;  // direction -> coefficient of dlog Z(direction)
  void add(const Charge& a, const GaussRational& c);
  bool is_zero() const { return terms.empty(); }
};

struct SymbolicTwoForm {
  std::map<std::pair<Charge, Charge>, GaussRational> terms;  // first < second
  void add_wedge(const Charge& p, const Charge& q, const GaussRational& c);
  bool is_zero() const { return terms.empty(); }
};

std::string to_string(const SymbolicOneForm& w);
std::string to_string(const SymbolicTwoForm& w);

using OneFormMatrix = std::vector<std::vector<SymbolicOneForm>>;
using TwoFormMatrix = std::vector<std::vector<SymbolicTwoForm>>;
using ComplexMatrix = std::vector<std::vector<cplx>>;

struct MeromorphicConnection {
  int size = 0;
  std::vector<cplx> u_diag;
  ComplexMatrix v;
};

// f^a = dt(a) / (2 pi i) for uncoupled structures; exact part in units of (2 pi i)^{-1}.
Rational joyce_uncoupled_exact(const BpsStructure& s, const Charge& a);
cplx joyce_uncoupled(const BpsStructure& s, const Charge& a);
FMap joyce_table(const BpsStructure& s, const std::vector<Charge>& delta);

struct ProjectedConnection {
  std::vector<Charge> delta;
  OneFormMatrix a;
  std::vector<std::vector<GaussRational>> v_exact;
  MeromorphicConnection conn;
};

ProjectedConnection projected_connection(const BpsStructure& s, const std::vector<Charge>& delta);
// Same construction for an arbitrary symmetric f (used for coupled witnesses).
ProjectedConnection projected_connection(const SkewForm& form, const std::vector<cplx>& z, const FMap& f,
                                         const std::vector<Charge>& delta);

TwoFormMatrix curvature(const OneFormMatrix& a);
// [A, V] as a matrix of one-forms, units (2 pi i)^{-2}.
OneFormMatrix commutator(const OneFormMatrix& a, const std::vector<std::vector<GaussRational>>& v);

struct AxiomReport {
  bool flat = true;
  bool commutes = true;
  bool v_skew = true;
  bool u_linear = true;
  std::string witness;
  bool all() const { return flat && commutes && v_skew && u_linear; }
};

AxiomReport check_frobenius_axioms(const BpsStructure& s, const std::vector<Charge>& delta);
AxiomReport check_frobenius_axioms(const SkewForm& form, const std::vector<cplx>& z, const FMap& f,
                                   const std::vector<Charge>& delta);

std::vector<Charge> oscillator_subset(const Charge& gamma, const Charge& beta, int n, const SkewForm& form);

MeromorphicConnection rescale_hbar(const MeromorphicConnection& conn, double hbar);

struct CoupledWitness {
  SkewForm form;
  std::vector<cplx> z;
  FMap f;
  std::vector<Charge> delta;
};

// Three classes with pairwise nonzero pairings and f supported on their differences.
CoupledWitness coupled_witness();

}  // namespace bpsosc
