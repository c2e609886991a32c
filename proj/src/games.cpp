#include "cluekit/games.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "cluekit/clue.hpp"
#include "cluekit/infotheory.hpp"
#include "cluekit/spectral.hpp"

namespace cluekit {

namespace {

void check_size(int n, const char* what) {
  if (n < 0 || n > kGameMaxN) {
    throw GuardError(std::string(what) + ": n exceeds " + std::to_string(kGameMaxN));
  }
}

}  // namespace

CooperativeGame::CooperativeGame(int n, std::vector<double> values) : n_(n), v_(std::move(values)) {
  check_size(n, "cooperative game");
  if (v_.size() != (std::size_t{1} << n)) throw DomainError("cooperative game: need 2^n values");
  if (v_[0] != 0.0) throw DomainError("cooperative game: v(empty) must be 0");
}

CooperativeGame build_clue_game(const FunctionTable& f) {
  check_size(f.n(), "build_clue_game");
  auto norms = efron_stein(f).norms;
  norms[0] = 0.0;
  subset_zeta(norms);
  return CooperativeGame(f.n(), std::move(norms));
}

CooperativeGame build_iclue_game(const FunctionTable& f) {
  check_size(f.n(), "build_iclue_game");
  std::vector<double> v(std::size_t{1} << f.n());
  v[0] = 0.0;
  for (std::size_t s = 1; s < v.size(); ++s) v[s] = mutual_information(f, SubsetMask{s});
  return CooperativeGame(f.n(), std::move(v));
}

CooperativeGame build_clue_power_game(const FunctionTable& f, double k) {
  check_size(f.n(), "build_clue_power_game");
  if (!(k > 0.0)) throw DomainError("build_clue_power_game: k must be > 0");
  auto v = clue_all_subsets(f);
  for (double& x : v) x = std::pow(std::max(0.0, x), k);
  v[0] = 0.0;
  return CooperativeGame(f.n(), std::move(v));
}

std::vector<double> shapley(const CooperativeGame& v) {
  const int n = v.n();
  std::vector<double> phi(n, 0.0);
  if (n == 0) return phi;
  // weight[s] = s! (n-s-1)! / n!, built by the ratio recurrence.
  std::vector<double> weight(n);
  weight[0] = 1.0 / n;
  for (int s = 1; s < n; ++s) weight[s] = weight[s - 1] * s / (n - s);
  const auto& t = v.values();
  for (std::uint64_t S = 0; S < t.size(); ++S) {
    const double w = weight[std::min(std::popcount(S), n - 1)];
    for (int i = 0; i < n; ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      if (S & bit) continue;
      phi[i] += w * (t[S | bit] - t[S]);
    }
  }
  return phi;
}

SupermodularityCheck is_supermodular(const CooperativeGame& v, double tol) {
  if (v.n() > kSupermodularMaxN) {
    throw GuardError("is_supermodular: n exceeds " + std::to_string(kSupermodularMaxN));
  }
  const auto& t = v.values();
  SupermodularityCheck r;
  for (std::uint64_t S = 0; S < t.size(); ++S) {
    for (std::uint64_t T = S + 1; T < t.size(); ++T) {
      if (t[S] + t[T] > t[S | T] + t[S & T] + tol) {
        r.supermodular = false;
        r.witness = std::make_pair(SubsetMask{S}, SubsetMask{T});
        return r;
      }
    }
  }
  return r;
}

bool shapley_in_core(const CooperativeGame& v, double tol) {
  const auto phi = shapley(v);
  const auto& t = v.values();
  for (std::uint64_t S = 1; S < t.size(); ++S) {
    double s = 0.0;
    for (int i : SubsetMask{S}.indices()) s += phi[i];
    if (s < t[S] - tol) return false;
  }
  return true;
}

CooperativeGame restrict(const CooperativeGame& v, SubsetMask S) {
  S.check_within(v.n());
  std::vector<double> out(v.values().size());
  for (std::uint64_t T = 0; T < out.size(); ++T) out[T] = v.values()[T & S.bits()];
  return CooperativeGame(v.n(), std::move(out));
}

bool subgame_shapley_monotone(const CooperativeGame& v, SubsetMask S, SubsetMask T, double tol) {
  if (!S.is_subset_of(T)) throw DomainError("subgame_shapley_monotone: S is not a subset of T");
  if (!is_supermodular(v).supermodular) {
    throw DomainError("subgame_shapley_monotone: game is not supermodular");
  }
  const auto phi_s = shapley(restrict(v, S));
  const auto phi_t = shapley(restrict(v, T));
  for (int i : S.indices()) {
    if (phi_s[i] > phi_t[i] + tol) return false;
  }
  return true;
}

TransitiveBoundReport transitive_game_bound(const CooperativeGame& v, const GroupAction& action,
                                            double tol) {
  if (action.n() != v.n()) throw DomainError("transitive_game_bound: sizes differ");
  TransitiveBoundReport r;
  const auto& t = v.values();
  r.invariant = true;
  for (const auto& g : action.generators()) {
    for (std::uint64_t S = 0; S < t.size() && r.invariant; ++S) {
      if (std::abs(t[permute_subset(SubsetMask{S}, g).bits()] - t[S]) > tol) r.invariant = false;
    }
  }
  r.transitive = action.is_transitive();
  r.shapley_in_core = shapley_in_core(v, tol);
  if (!r.invariant) throw DomainError("transitive_game_bound: game is not invariant");
  if (!r.transitive) throw DomainError("transitive_game_bound: action is not transitive");
  if (!r.shapley_in_core) throw DomainError("transitive_game_bound: Shapley value not in core");
  const double total = t.back();
  const double n = v.n();
  r.max_excess = -std::numeric_limits<double>::infinity();
  for (std::uint64_t S = 0; S < t.size(); ++S) {
    const double excess = t[S] - std::popcount(S) / n * total;
    if (excess > r.max_excess) {
      r.max_excess = excess;
      if (excess > tol) r.worst = SubsetMask{S};
    }
  }
  r.holds = r.max_excess <= tol;
  return r;
}

}  // namespace cluekit
