#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cluekit/core.hpp"
#include "cluekit/symmetry.hpp"

namespace cluekit {

// Pointwise evaluator on the binary cube: bits[i] = 1 reads as omega_i = +1,
// bits[i] = 0 as omega_i = -1.
using Evaluator = std::function<double(std::span<const std::uint8_t>)>;

// Evaluators work at any size up to this; exact tables stay behind the
// exact-engine guard.
inline constexpr int kZooMaxN = 4096;

// A named function on n binary coordinates together with the symmetry group
// it is built to respect.
struct ZooFunction {
  std::string name;
  int n = 0;
  Evaluator eval;
  std::function<GroupAction()> group;

  // Exact table on the uniform cube (guarded).
  FunctionTable table() const;
  FunctionTable table(const ProductSpace& space) const;
};

// {-1,+1}: omega_j. Tagged with the cyclic shift of the other coordinates.
ZooFunction dictator(int n, int j);
// {-1,+1}: prod omega_i.
ZooFunction parity(int n);
// Integer: sum omega_i.
ZooFunction sum(int n);
// {-1,+1}, odd n.
ZooFunction majority(int n);
// {-1,+1}: +1 iff sum omega_i > a sqrt(n); ties go to -1.
ZooFunction asym_majority(int n, double a);
// {0,1}: 1 iff some tribe of l consecutive coordinates is all +1; k tribes.
ZooFunction tribes(int l, int k);

// Majority part M = coordinates 0..m-1; tribes part T = coordinates m..m+t-1
// laid out as floor(t / l) tribes of size l (leftover coordinates are
// dummies). f = Maj^{+a}(omega_M) when Tribes(omega_T) = 1 and Maj^{-a}(omega_M)
// otherwise.
ZooFunction composite(int m, int t, double a, int l);
// Uses l = balanced_tribe_size(t).
ZooFunction composite(int m, int t, double a);

// Part masks need m + t <= 64; the index list works at any size.
SubsetMask composite_majority_part(int m, int t);
SubsetMask composite_tribes_part(int m, int t);
std::vector<int> composite_tribes_indices(int m, int t);

// round((t / ln t)^{3/2}).
int composite_coupling(int t);
// max(1, round(log2 t - log2 log2 t)).
int balanced_tribe_size(int t);
// Largest t with t + composite_coupling(t) <= total.
int composite_split(int total);

// Influence of one coordinate on Maj^a over m coordinates, computed exactly:
// P[sum of the other m - 1 coordinates lies in (theta - 1, theta + 1]],
// theta = a sqrt m.
double asym_majority_influence(int m, double a);
// a >= 0 at which the influence of Maj^a first drops to <= target. The
// influence is a step function of a; bisection locates the step and the
// result is placed at the middle of that plateau so that sum = theta ties
// cannot occur.
double find_a(int m, double target_influence);

// Exact clue(f | T) for the composite on the uniform cube:
// tau (1 - tau) (mu_+ - mu_-)^2 / Var f with tau = P[Tribes = 1] and
// mu_{+-} = E Maj^{+-a}.
double composite_tribes_clue(int m, int t, double a, int l);

// Parses dictator:n,j  parity:n  sum:n  maj:n  amaj:n,a  tribes:l,k
// composite:m,t,a[,l]. Throws ParseError.
ZooFunction parse_zoo(const std::string& spec);

struct ZooEntry {
  std::string syntax;
  std::string description;
};
std::vector<ZooEntry> zoo_catalog();

}  // namespace cluekit
