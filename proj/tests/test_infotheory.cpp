#include <catch2/catch_amalgamated.hpp>

#include "cluekit/infotheory.hpp"
#include "cluekit/symmetry.hpp"
#include "cluekit/zoo.hpp"
#include "oracles.hpp"

using namespace cluekit;
using Catch::Approx;

namespace {

double h2(double p) { return -p * std::log(p) - (1 - p) * std::log(1 - p); }

}  // namespace

TEST_CASE("entropy examples") {
  const std::vector<double> fair{0.5, 0.5};
  const std::vector<double> point{0.0, 1.0, 0.0};
  const std::vector<double> four{0.25, 0.25, 0.25, 0.25};
  CHECK(entropy(fair) == Approx(std::log(2.0)));
  CHECK(entropy(point) == 0.0);
  CHECK(entropy(four) == Approx(std::log(4.0)));
  const std::vector<double> bad{0.5, 0.6};
  CHECK_THROWS_AS(entropy(bad), DomainError);
}

TEST_CASE("mutual information examples") {
  CHECK(mutual_information(dictator(3, 0).table(), SubsetMask{1}) == Approx(std::log(2.0)));
  const auto par = parity(4).table();
  for (std::uint64_t U = 0; U < 15; ++U) {
    CHECK(mutual_information(par, SubsetMask{U}) == Approx(0.0).margin(1e-15));
  }
  const double want = std::log(2.0) - h2(0.25);
  CHECK(want == Approx(0.1308).margin(1e-4));
  CHECK(mutual_information(majority(3).table(), SubsetMask{1}) == Approx(want).margin(1e-14));
}

TEST_CASE("mutual information matches the joint-table oracle") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    const auto s = oracle::random_space(4, 2 + rep % 2, rng);
    const auto f = oracle::random_function(s, rng, true);
    for (std::uint64_t U = 0; U < 16; ++U) {
      CHECK(mutual_information(f, SubsetMask{U}) ==
            Approx(oracle::mutual_information(f, SubsetMask{U})).margin(1e-12));
    }
    CHECK(entropy_of_values(f) == Approx(oracle::entropy_of(f)).margin(1e-12));
  }
}

TEST_CASE("i-clue") {
  const auto maj = majority(3).table();
  CHECK(i_clue(maj, SubsetMask{7}).i_clue == Approx(1.0));
  CHECK(i_clue(parity(3).table(), SubsetMask{3}).i_clue == Approx(0.0).margin(1e-15));
  const auto r = i_clue(maj, SubsetMask{1});
  CHECK(r.i_clue == Approx(0.1887).margin(1e-4));
  CHECK(r.i_clue == Approx((std::log(2.0) - h2(0.25)) / std::log(2.0)).margin(1e-14));
  CHECK_THROWS_AS(i_clue(FunctionTable(ProductSpace::uniform(1), {1.0, 1.0}), SubsetMask{1}),
                  DegenerateError);
}

TEST_CASE("data processing: refining U never decreases I") {
  std::mt19937_64 rng(29);
  for (int rep = 0; rep < 10; ++rep) {
    const auto f = oracle::random_function(oracle::random_space(5, 2, rng), rng, true);
    for (std::uint64_t T = 0; T < 32; ++T) {
      for (std::uint64_t S = T;; S = (S - 1) & T) {
        CHECK(mutual_information(f, SubsetMask{S}) <=
              mutual_information(f, SubsetMask{T}) + 1e-12);
        if (S == 0) break;
      }
    }
  }
}

TEST_CASE("I is invariant under the symmetry group") {
  const auto z = tribes(2, 3);
  const auto f = z.table();
  const auto g = z.group();
  for (const auto& gamma : g.elements()) {
    for (std::uint64_t U : {1u, 3u, 5u, 18u, 33u}) {
      CHECK(mutual_information(f, permute_subset(SubsetMask{U}, gamma)) ==
            Approx(mutual_information(f, SubsetMask{U})).margin(1e-12));
    }
  }
}

TEST_CASE("entropy functional and kl clue") {
  CHECK(ent_functional(FunctionTable(ProductSpace::uniform(2), {3, 3, 3, 3})) == Approx(0.0).margin(1e-15));
  const auto ind = majority(3).table().affine(0.5, 0.5);
  CHECK(ent_functional(ind) == Approx(std::log(2.0) / 2));
  const auto proj = conditional_expectation(ind, SubsetMask{1});
  CHECK(ent_functional(proj) == Approx(0.0654).margin(1e-4));
  CHECK(kl_clue(ind, SubsetMask{7}) == Approx(1.0));
  CHECK(kl_clue(ind, SubsetMask::empty()) == Approx(0.0).margin(1e-15));
  CHECK(kl_clue(ind, SubsetMask{1}) == Approx(0.1887).margin(1e-4));
  CHECK_THROWS_AS(ent_functional(majority(3).table()), DomainError);

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> pos(0.1, 2.0);
  const auto s = oracle::random_space(4, 3, rng);
  std::vector<double> v(s.config_count());
  for (double& x : v) x = pos(rng);
  const FunctionTable f(s, v);
  for (std::uint64_t U = 0; U < 16; ++U) {
    CHECK(kl_clue(f, SubsetMask{U}) ==
          Approx(oracle::ent_conditional(f, SubsetMask{U}) / ent_functional(f)).margin(1e-12));
  }
}

TEST_CASE("shearer deficit") {
  const auto maj = majority(3).table();
  const std::vector<SubsetMask> full3(3, SubsetMask{7});
  CHECK(shearer_deficit(maj, full3, 3) == Approx(0.0).margin(1e-12));
  const auto par = parity(3).table();
  const std::vector<SubsetMask> singles{SubsetMask{1}, SubsetMask{2}, SubsetMask{4}};
  CHECK(shearer_deficit(par, singles, 1) == Approx(entropy_of_values(par)));
  const std::vector<SubsetMask> pairs{SubsetMask{3}, SubsetMask{5}, SubsetMask{6}};
  CHECK(shearer_deficit(maj, pairs, 2) >= -1e-12);
  CHECK_THROWS_AS(shearer_deficit(maj, pairs, 1), DomainError);
  CHECK(kl_shearer_deficit(maj.affine(0.5, 0.5), pairs, 2) >= -1e-12);
}
