#include <catch2/catch_amalgamated.hpp>

#include "cluekit/clue.hpp"
#include "cluekit/zoo.hpp"
#include "oracles.hpp"

using namespace cluekit;
using Catch::Approx;

TEST_CASE("l2 clue examples") {
  for (int n : {3, 5, 8}) {
    const auto f = sum(n).table();
    for (std::uint64_t U = 0; U < (std::uint64_t{1} << n); U += 3) {
      CHECK(clue(f, SubsetMask{U}) == Approx(std::popcount(U) / double(n)).margin(1e-12));
    }
  }
  const auto par = parity(4).table();
  for (std::uint64_t U = 0; U < 15; ++U) CHECK(clue(par, SubsetMask{U}) == Approx(0.0).margin(1e-15));
  const auto maj = majority(3).table();
  CHECK(clue(maj, SubsetMask{1}) == Approx(0.25));
  CHECK(clue(maj, SubsetMask{7}) == Approx(1.0));
}

TEST_CASE("clue agrees with its spectral form and the oracle") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 8; ++rep) {
    const auto s = rep % 2 ? oracle::random_space(4, 3, rng) : ProductSpace::uniform(5);
    const auto f = oracle::random_function(s, rng);
    const auto dist = spectral_distribution(efron_stein(f), true);
    const auto all = clue_all_subsets(dist);
    const auto direct = clue_all_subsets(f);
    for (std::uint64_t U = 0; U < all.size(); ++U) {
      const double ref = oracle::clue(f, SubsetMask{U});
      CHECK(all[U] == Approx(ref).margin(1e-10));
      CHECK(direct[U] == Approx(ref).margin(1e-10));
      CHECK(clue_spectral(dist, SubsetMask{U}) == Approx(ref).margin(1e-10));
    }
  }
  const auto m = spectral_distribution(walsh_hadamard(majority(3).table()), true);
  CHECK(clue_spectral(m, SubsetMask{0b011}) == Approx(0.5));
}

TEST_CASE("significance") {
  const auto par = parity(4).table();
  for (std::uint64_t U = 1; U < 16; ++U) CHECK(sig(par, SubsetMask{U}) == Approx(1.0));
  CHECK(sig(dictator(3, 0).table(), SubsetMask{0b110}) == Approx(0.0).margin(1e-15));
  const auto maj = majority(3).table();
  CHECK(sig(maj, SubsetMask{1}) == Approx(0.5));
  const auto dist = spectral_distribution(walsh_hadamard(maj), true);
  for (std::uint64_t U = 0; U < 8; ++U) {
    CHECK(sig_spectral(dist, SubsetMask{U}) == Approx(sig(maj, SubsetMask{U})).margin(1e-12));
  }
}

TEST_CASE("influence, witness and coordinate influence") {
  const auto par = parity(4).table();
  const auto dict = dictator(3, 0).table();
  const auto maj = majority(3).table();
  CHECK(influence_set(par, SubsetMask{0b0101}) == Approx(1.0));
  CHECK(influence_set(dict, SubsetMask{1}) == Approx(1.0));
  CHECK(influence_set(maj, SubsetMask{1}) == Approx(0.5));
  CHECK(witness(dict, SubsetMask{1}) == Approx(1.0));
  CHECK(witness(par, SubsetMask{0b0111}) == Approx(0.0).margin(1e-15));
  CHECK(witness(maj, SubsetMask{0b011}) == Approx(0.5));
  CHECK(influence_coordinate(dict, 0) == Approx(1.0));
  for (int j = 0; j < 4; ++j) CHECK(influence_coordinate(par, j) == Approx(1.0));
  for (int j = 0; j < 3; ++j) CHECK(influence_coordinate(maj, j) == Approx(0.5));
  CHECK_THROWS_AS(influence_set(sum(3).table(), SubsetMask{1}), DomainError);
}

TEST_CASE("tv clue and p_min") {
  const auto ind = majority(3).table().affine(0.5, 0.5);
  CHECK(tv_clue(ind, SubsetMask::empty()) == Approx(0.0).margin(1e-15));
  CHECK(tv_clue(ind, SubsetMask{7}) == Approx(1.0));
  CHECK(tv_clue(ind, SubsetMask{1}) == Approx(0.5));
  CHECK(p_min(majority(3).table()) == Approx(0.5));
  CHECK(p_min(tribes(2, 2).table()) == Approx(7.0 / 16.0));
}

TEST_CASE("expected clue and revealment") {
  const auto maj = majority(3).table();
  const auto sing = RandomSetDistribution::uniform_singletons(3);
  CHECK(expected_clue(maj, sing) == Approx(0.25));
  CHECK(revealment(sing) == Approx(1.0 / 3.0));
  CHECK(expected_clue(maj, RandomSetDistribution::bernoulli(3, 0.5)) == Approx(13.0 / 32.0));
  const auto dict = dictator(5, 2).table();
  const auto s5 = RandomSetDistribution::uniform_singletons(5);
  CHECK(expected_clue(dict, s5) == Approx(revealment(s5)));
}

TEST_CASE("bernoulli identity on random functions") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 5; ++rep) {
    const auto f = oracle::random_function(ProductSpace::uniform(5), rng);
    for (double p : {0.1, 0.5, 0.9}) {
      CHECK(expected_clue(f, RandomSetDistribution::bernoulli(5, p)) ==
            Approx(oracle::noise_covariance(f, p) / oracle::var(f)).margin(1e-10));
    }
  }
}

TEST_CASE("projection distortion") {
  const auto maj = majority(3).table();
  const auto self = projection_distortion_check(maj, maj, SubsetMask{1});
  CHECK(self.eps == Approx(0.0).margin(1e-12));
  CHECK(self.ok());
  const auto aff = projection_distortion_check(maj, maj.affine(2.0, 3.0), SubsetMask{3});
  CHECK(aff.eps == Approx(0.0).margin(1e-12));
  CHECK(aff.clue_f == Approx(aff.clue_g).margin(1e-12));

  std::mt19937_64 rng(19);
  std::uniform_int_distribution<std::uint64_t> pick(0, 63);
  for (int rep = 0; rep < 200; ++rep) {
    const auto s = ProductSpace::uniform(6);
    const auto f = oracle::random_function(s, rng);
    const auto noise = oracle::random_function(s, rng);
    std::vector<double> gv(f.size());
    for (std::uint64_t x = 0; x < f.size(); ++x) gv[x] = f[x] + 0.3 * noise[x];
    const auto r = projection_distortion_check(f, f.with_values(gv), SubsetMask{pick(rng)});
    CHECK(r.ok());
  }
}

TEST_CASE("order chain witness <= clue <= sig <= influence") {
  std::mt19937_64 rng(47);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 2 + rep % 5;
    const std::size_t N = std::size_t{1} << n;
    std::vector<double> v(N, -1.0);
    std::fill(v.begin(), v.begin() + N / 2, 1.0);
    std::shuffle(v.begin(), v.end(), rng);
    const FunctionTable bal(ProductSpace::uniform(n), v);
    // Unbalanced table on a biased space.
    std::bernoulli_distribution coin(0.3);
    for (double& x : v) x = coin(rng) ? 1.0 : -1.0;
    const auto sp = oracle::random_space(n, 2, rng);
    const FunctionTable any(sp, v);
    const bool any_ok = variance(any) > 1e-9;
    for (std::uint64_t U = 0; U < N; ++U) {
      const SubsetMask M{U};
      const double c = clue(bal, M);
      CHECK(witness(bal, M) <= c + 1e-12);
      CHECK(c <= sig(bal, M) + 1e-12);
      CHECK(sig(bal, M) <= influence_set(bal, M) + 1e-12);
      if (!any_ok) continue;
      // General forms: Var(Pf) >= W - mu^2 and Var(f) sig <= I for +-1 f.
      const double mu = expectation(any);
      const double va = variance(any);
      CHECK(clue(any, M) * va >= witness(any, M) - mu * mu - 1e-12);
      CHECK(clue(any, M) <= sig(any, M) + 1e-12);
      CHECK(va * sig(any, M) <= influence_set(any, M) + 1e-12);
    }
  }
  // AND of two fair bits: W({0}) = 1/2 exceeds clue({0}) = 1/3.
  const FunctionTable land(ProductSpace::uniform(2), {-1, -1, -1, 1});
  CHECK(witness(land, SubsetMask{1}) == Approx(0.5));
  CHECK(clue(land, SubsetMask{1}) == Approx(1.0 / 3.0));
}
