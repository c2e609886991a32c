#include <catch2/catch_amalgamated.hpp>

#include "cluekit/clue.hpp"
#include "cluekit/montecarlo.hpp"
#include "cluekit/zoo.hpp"

using namespace cluekit;
using Catch::Approx;

TEST_CASE("mc_clue examples") {
  const auto maj = majority(3);
  const auto r = mc_clue(maj.eval, 3, SubsetMask{2}, 2000, 50, 99);
  CHECK(std::abs(r.estimate - 0.25) <= 3 * r.stderr_);
  CHECK(r.seed == 99);

  const auto d = dictator(4, 0);
  const auto rd = mc_clue(d.eval, 4, SubsetMask{1}, 500, 4, 1);
  CHECK(rd.estimate == 1.0);
  CHECK(rd.stderr_ == 0.0);

  const auto s = sum(16);
  const auto rs = mc_clue(s.eval, 16, SubsetMask{0xF}, 4000, 20, 3);
  CHECK(std::abs(rs.estimate - 0.25) <= 3 * rs.stderr_);

  const auto e = mc_clue(maj.eval, 3, SubsetMask::empty(), 100, 4, 1);
  CHECK(e.estimate == 0.0);
  CHECK(e.stderr_ == 0.0);
}

TEST_CASE("mc_clue index list overload agrees with the mask form") {
  const auto s = sum(10);
  const std::vector<int> U{3, 1, 1, 7};
  const auto a = mc_clue(s.eval, 10, std::span<const int>(U), 300, 5, 8);
  const auto b = mc_clue(s.eval, 10, SubsetMask{0b10001010}, 300, 5, 8);
  CHECK(a.estimate == b.estimate);
  CHECK(a.stderr_ == b.stderr_);
  const std::vector<int> bad{10};
  CHECK_THROWS_AS(mc_clue(s.eval, 10, std::span<const int>(bad), 300, 5, 8), DomainError);
}

TEST_CASE("mc_clue beyond 64 coordinates") {
  const auto s = sum(100);
  std::vector<int> U(25);
  std::iota(U.begin(), U.end(), 70);
  const auto r = mc_clue(s.eval, 100, std::span<const int>(U), 3000, 8, 4);
  CHECK(std::abs(r.estimate - 0.25) <= 3 * r.stderr_);
}

TEST_CASE("mc_clue argument checks and degenerate input") {
  const auto maj = majority(3);
  CHECK_THROWS_AS(mc_clue(maj.eval, 3, SubsetMask{1}, 1, 5, 0), DomainError);
  CHECK_THROWS_AS(mc_clue(maj.eval, 3, SubsetMask{1}, 10, 1, 0), DomainError);
  CHECK_THROWS_AS(mc_clue(maj.eval, 3, SubsetMask{8}, 10, 3, 0), DomainError);
  const Evaluator constant = [](std::span<const std::uint8_t>) { return 1.0; };
  CHECK_THROWS_AS(mc_clue(constant, 3, SubsetMask{1}, 10, 3, 0), DegenerateError);
}

TEST_CASE("clamping of negative corrected estimates") {
  const auto p = parity(6);
  bool clamped = false;
  for (std::uint64_t seed = 0; seed < 20 && !clamped; ++seed) {
    const auto r = mc_clue(p.eval, 6, SubsetMask{1}, 50, 3, seed);
    CHECK(r.estimate >= 0.0);
    clamped = r.clamped;
    if (r.clamped) CHECK(r.estimate == 0.0);
  }
  CHECK(clamped);
}

TEST_CASE("mc_stability") {
  const auto maj = majority(3);
  const auto one = mc_stability(maj.eval, 3, 1.0, 1000, 2);
  CHECK(one.estimate == 1.0);
  const auto zero = mc_stability(maj.eval, 3, 0.0, 20000, 2);
  CHECK(std::abs(zero.estimate) <= 3 * zero.stderr_);
  const auto half = mc_stability(maj.eval, 3, 0.5, 100000, 2);
  CHECK(std::abs(half.estimate - 13.0 / 32.0) <= 3 * half.stderr_);
}

TEST_CASE("mc expected clue on bernoulli sets") {
  const auto maj = majority(3);
  CHECK(mc_expected_clue_bernoulli(maj.eval, 3, 1.0, 10, 100, 4, 1).estimate == Approx(1.0));
  CHECK(mc_expected_clue_bernoulli(maj.eval, 3, 0.0, 10, 100, 4, 1).estimate == 0.0);
  const auto h = mc_expected_clue_bernoulli(maj.eval, 3, 0.5, 300, 300, 10, 6);
  CHECK(std::abs(h.estimate - 13.0 / 32.0) <= 3 * h.stderr_);
}

TEST_CASE("determinism across thread counts") {
  const auto s = sum(12);
  std::vector<double> est;
  for (int t : {1, 3, 8}) {
    set_thread_count_override(t);
    CHECK(thread_count() == t);
    est.push_back(mc_clue(s.eval, 12, SubsetMask{7}, 1000, 6, 77).estimate);
  }
  set_thread_count_override(0);
  CHECK(est[0] == est[1]);
  CHECK(est[1] == est[2]);
}

TEST_CASE("pairwise sum and seed derivation") {
  std::vector<double> xs(1001, 0.1);
  CHECK(pairwise_sum(xs) == Approx(100.1).margin(1e-12));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  Rng a = make_rng(5, 3);
  Rng b = make_rng(5, 3);
  CHECK(a() == b());
}
