#include <catch2/catch_amalgamated.hpp>

#include "cluekit/games.hpp"
#include "cluekit/clue.hpp"
#include "cluekit/zoo.hpp"
#include "oracles.hpp"

using namespace cluekit;
using Catch::Approx;

namespace {

CooperativeGame sqrt_game(int n) {
  std::vector<double> v(std::size_t{1} << n);
  for (std::size_t S = 0; S < v.size(); ++S) v[S] = std::sqrt(double(std::popcount(S)));
  return CooperativeGame(n, v);
}

CooperativeGame additive(int n) {
  std::vector<double> v(std::size_t{1} << n);
  for (std::size_t S = 0; S < v.size(); ++S) v[S] = std::popcount(S);
  return CooperativeGame(n, v);
}

}  // namespace

TEST_CASE("clue game values") {
  const auto s = build_clue_game(sum(4).table());
  for (std::uint64_t S = 0; S < 16; ++S) CHECK(s(SubsetMask{S}) == Approx(std::popcount(S)).margin(1e-12));
  const auto d = build_clue_game(dictator(3, 0).table());
  for (std::uint64_t S = 0; S < 8; ++S) CHECK(d(SubsetMask{S}) == Approx(S & 1 ? 1.0 : 0.0).margin(1e-12));
  const auto m = build_clue_game(majority(3).table());
  CHECK(m(SubsetMask{1}) == Approx(0.25));
  CHECK(m(SubsetMask{3}) == Approx(0.5));
  CHECK(m(SubsetMask{7}) == Approx(1.0));
  CHECK_THROWS_AS(CooperativeGame(1, {1.0, 2.0}), DomainError);
}

TEST_CASE("shapley values") {
  for (double phi : shapley(build_clue_game(sum(5).table()))) CHECK(phi == Approx(1.0));
  const auto d = shapley(build_clue_game(dictator(3, 0).table()));
  CHECK(d[0] == Approx(1.0));
  CHECK(d[1] == Approx(0.0).margin(1e-12));
  for (double phi : shapley(build_clue_game(majority(3).table()))) CHECK(phi == Approx(1.0 / 3.0));
}

TEST_CASE("shapley agrees with the permutation oracle and the spectral marginal") {
  std::mt19937_64 rng(37);
  for (int rep = 0; rep < 6; ++rep) {
    const int n = 3 + rep % 4;
    const auto f = oracle::random_function(ProductSpace::uniform(n), rng);
    const auto v = build_clue_game(f);
    const auto phi = shapley(v);
    const auto ref = oracle::shapley_by_orders(n, v.values());
    const auto marg = spectral_marginals(spectral_distribution(efron_stein(f), true));
    const double var = variance(f);
    for (int i = 0; i < n; ++i) {
      CHECK(phi[i] == Approx(ref[i]).margin(1e-12));
      CHECK(phi[i] / var == Approx(marg[i]).margin(1e-10));
    }
  }
}

TEST_CASE("supermodularity") {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 6; ++rep) {
    const auto s = oracle::random_space(4, 2 + rep % 2, rng);
    const auto f = oracle::random_function(s, rng, rep % 3 == 0);
    CHECK(is_supermodular(build_clue_game(f), 1e-12).supermodular);
    CHECK(is_supermodular(build_iclue_game(f.affine(1.0, 0.0)), 1e-12).supermodular);
  }
  CHECK(is_supermodular(additive(4)).supermodular);
  const auto r = is_supermodular(sqrt_game(3));
  CHECK_FALSE(r.supermodular);
  REQUIRE(r.witness);
  CHECK(r.witness->first == SubsetMask{1});
  CHECK(r.witness->second == SubsetMask{2});
}

TEST_CASE("core membership") {
  CHECK(shapley_in_core(build_clue_game(tribes(2, 2).table())));
  CHECK(shapley_in_core(additive(5)));
  CHECK_FALSE(shapley_in_core(sqrt_game(3)));
  CHECK(shapley(sqrt_game(3))[0] == Approx(std::sqrt(3.0) / 3.0));
}

TEST_CASE("subgame monotonicity") {
  const auto a = additive(4);
  CHECK(subgame_shapley_monotone(a, SubsetMask{3}, SubsetMask{15}));
  const auto m = build_clue_game(majority(3).table());
  CHECK(shapley(restrict(m, SubsetMask{3}))[0] == Approx(0.25));
  CHECK(subgame_shapley_monotone(m, SubsetMask{3}, SubsetMask{7}));
  CHECK_THROWS_AS(subgame_shapley_monotone(sqrt_game(3), SubsetMask{1}, SubsetMask{3}), DomainError);
  CHECK_THROWS_AS(subgame_shapley_monotone(m, SubsetMask{5}, SubsetMask{3}), DomainError);

  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 + rep % 5;
    const auto v = build_clue_game(oracle::random_function(ProductSpace::uniform(n), rng));
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    for (std::uint64_t T = 0; T <= full; ++T) {
      for (std::uint64_t S = T;; S = (S - 1) & T) {
        CHECK(subgame_shapley_monotone(v, SubsetMask{S}, SubsetMask{T}));
        if (S == 0) break;
      }
    }
  }
}

TEST_CASE("transitive game bound") {
  const auto fs = sum(5);
  const auto s = transitive_game_bound(build_clue_game(fs.table()), fs.group());
  CHECK(s.holds);
  CHECK(s.max_excess == Approx(0.0).margin(1e-12));
  const auto p = build_clue_game(parity(4).table());
  for (std::uint64_t S = 0; S < 15; ++S) CHECK(p(SubsetMask{S}) == Approx(0.0).margin(1e-12));
  const auto fm = majority(3);
  CHECK(transitive_game_bound(build_clue_game(fm.table()), fm.group()).holds);
  CHECK_THROWS_AS(transitive_game_bound(build_clue_game(dictator(3, 0).table()), GroupAction::cyclic(3)),
                  DomainError);
}
