#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cluekit/core.hpp"
#include "cluekit/spectral.hpp"

namespace cluekit {

// Var(E[f|F_U]) / Var(f). Throws DegenerateError when Var(f) = 0.
double clue(const FunctionTable& f, SubsetMask U);

// P[S_f subset U | S_f nonempty]; dist must be conditioned.
double clue_spectral(const SpectralDistribution& dist, SubsetMask U);
// All 2^n values of clue_spectral via the subset-zeta transform.
std::vector<double> clue_all_subsets(const SpectralDistribution& dist);
// All 2^n values of clue by direct fiber sums.
std::vector<double> clue_all_subsets(const FunctionTable& f);

// 1 - clue(f | U^c).
double sig(const FunctionTable& f, SubsetMask U);
// P[S_f meets U | S_f nonempty].
double sig_spectral(const SpectralDistribution& dist, SubsetMask U);

// P[f is not determined by the coordinates outside U]. Boolean f only.
double influence_set(const FunctionTable& f, SubsetMask U);
// P[f is determined by the coordinates in U]. Boolean f only.
double witness(const FunctionTable& f, SubsetMask U);
// P[f(omega) != f(omega with bit j flipped)]. Boolean f, binary space.
double influence_coordinate(const FunctionTable& f, int j);

// E|E[f|F_U] - E f| / E|f - E f|.
double tv_clue(const FunctionTable& f, SubsetMask U);

// min(P[f = 1], P[f = 0]) after mapping a {-1,+1} table to {0,1}.
double p_min(const FunctionTable& f);

// sum_atoms P(atom) clue(f | atom).
double expected_clue(const FunctionTable& f, const RandomSetDistribution& dist);

struct ClueReport {
  double l2_clue = 0.0;
  double sig = 0.0;
  double tv_clue = 0.0;
  // Present for Boolean tables only.
  std::optional<double> influence_set;
  std::optional<double> witness;
  std::optional<double> p_min;
  bool null_fibers = false;
};

ClueReport clue_report(const FunctionTable& f, SubsetMask U);

// Finite-size check of the projection lemmas for P = E[. | F_U]:
//   Corr(Pf, Pg) >= 1 - eps / c        with c = min(clue(f|U), clue(g|U))
//   clue(g|U) >= clue(f|U) - 2 eps     (and symmetrically)
//   Corr(Pf, Pg) >= 1 - eps / (clue(f|U) - 2 eps)   when the denominator is > 0
// where eps = 1 - Corr(f, g).
struct ProjectionDistortionReport {
  double eps = 0.0;
  double clue_f = 0.0;
  double clue_g = 0.0;
  double c = 0.0;
  std::optional<double> projected_corr;  // absent when a projection is constant
  bool corr_bound_applicable = false;
  bool corr_bound_holds = true;
  bool clue_shift_holds = true;
  bool shifted_corr_bound_holds = true;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ProjectionDistortionReport projection_distortion_check(const FunctionTable& f,
                                                       const FunctionTable& g, SubsetMask U,
                                                       double tol = 1e-9);

}  // namespace cluekit
