#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cluekit/core.hpp"
#include "cluekit/symmetry.hpp"

namespace cluekit {

// Characteristic function v : 2^[n] -> R, dense over masks, with v(empty) = 0.
class CooperativeGame {
 public:
  CooperativeGame(int n, std::vector<double> values);

  int n() const { return n_; }
  double operator()(SubsetMask S) const { return v_[S.bits()]; }
  const std::vector<double>& values() const { return v_; }

 private:
  int n_;
  std::vector<double> v_;
};

inline constexpr int kGameMaxN = 20;

// v_f(U) = Var(E[f | F_U]) via the subset-zeta transform of the
// Efron-Stein norms.
CooperativeGame build_clue_game(const FunctionTable& f);
// v(S) = I(Z : X_S).
CooperativeGame build_iclue_game(const FunctionTable& f);
// v(S) = clue(f | S)^k.
CooperativeGame build_clue_power_game(const FunctionTable& f, double k);

// phi_i = sum_{S not containing i} |S|! (n-|S|-1)! / n! (v(S + i) - v(S)).
std::vector<double> shapley(const CooperativeGame& v);

struct SupermodularityCheck {
  bool supermodular = true;
  std::optional<std::pair<SubsetMask, SubsetMask>> witness;  // first violating (S, T)
};

inline constexpr int kSupermodularMaxN = 10;

// v(S) + v(T) <= v(S u T) + v(S n T) + tol for all pairs; n <= 10.
SupermodularityCheck is_supermodular(const CooperativeGame& v, double tol = 1e-12);

// sum_{i in S} phi_i >= v(S) - tol for every S.
bool shapley_in_core(const CooperativeGame& v, double tol = 1e-10);

// v_S(T) = v(T n S): the subgame on S, with the players outside S null.
CooperativeGame restrict(const CooperativeGame& v, SubsetMask S);

// phi_i(v_S) <= phi_i(v_T) + tol for all i in S. Throws DomainError when
// S is not a subset of T or v is not supermodular.
bool subgame_shapley_monotone(const CooperativeGame& v, SubsetMask S, SubsetMask T,
                              double tol = 1e-10);

struct TransitiveBoundReport {
  bool invariant = false;
  bool transitive = false;
  bool shapley_in_core = false;
  bool holds = true;                 // v(S) <= |S|/n v(V) + tol for all S
  double max_excess = 0.0;           // max_S v(S) - |S|/n v(V)
  std::optional<SubsetMask> worst;   // argmax of the excess when it is > tol
};

// Throws DomainError when v is not invariant, the action is not transitive,
// or the Shapley vector is outside the core.
TransitiveBoundReport transitive_game_bound(const CooperativeGame& v, const GroupAction& action,
                                            double tol = 1e-10);

}  // namespace cluekit
