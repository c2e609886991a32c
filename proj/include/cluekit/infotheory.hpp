#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cluekit/core.hpp"

namespace cluekit {

// Values closer than this merge into one atom of Z = f(omega).
inline constexpr double kZGroupTol = 1e-12;

// Joint law of (Z, X_U) with Z = f(omega) grouped into finitely many atoms.
// p[z * u_count + u] = P[Z = z_values[z], X_U = u], u the compressed U-key.
struct DiscreteJoint {
  std::vector<double> z_values;
  std::uint64_t u_count = 0;
  std::vector<double> p;

  std::vector<double> z_marginal() const;
  std::vector<double> u_marginal() const;
};

// Distinct values of f up to kZGroupTol, in increasing order. Each group is
// represented by its smallest member.
std::vector<double> z_atoms(const FunctionTable& f);

DiscreteJoint discrete_joint(const FunctionTable& f, SubsetMask U);

// -sum p ln p with 0 ln 0 = 0 (nats). Throws DomainError unless p is a
// probability vector within 1e-12.
double entropy(std::span<const double> p);

// H(Z) for Z = f(omega).
double entropy_of_values(const FunctionTable& f);

// I(Z : X_U) = sum p(z,u) ln(p(z,u) / (p(z) p(u))), clamped at 0.
double mutual_information(const FunctionTable& f, SubsetMask U);

struct IClue {
  double i_clue = 0.0;  // I(Z : X_U) / H(Z)
  double sig_i = 0.0;   // 1 - I(Z : X_{U^c}) / H(Z)
  double mi = 0.0;
  double h_z = 0.0;
};

// Throws DegenerateError when Z is constant.
IClue i_clue(const FunctionTable& f, SubsetMask U);

// Ent(f) = E[f ln f] - E f ln E f for f >= 0.
double ent_functional(const FunctionTable& f);

// Ent(E[f|F_U]) / Ent(f); f >= 0 with Ent(f) > 0.
double kl_clue(const FunctionTable& f, SubsetMask U);

// k H(Z) - sum_j I(Z : X_{S_j}). Throws DomainError when some coordinate is in
// more than k cover sets.
double shearer_deficit(const FunctionTable& f, std::span<const SubsetMask> cover, int k);

// k D(mu || P) - sum_j D(mu_{S_j} || P_{S_j}) for the biased measure
// d mu = (f / E f) dP, using D(mu_S || P_S) = Ent(E[f|F_S]) / E f.
double kl_shearer_deficit(const FunctionTable& f, std::span<const SubsetMask> cover, int k);

}  // namespace cluekit
