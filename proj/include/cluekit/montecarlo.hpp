#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cluekit/core.hpp"
#include "cluekit/rng.hpp"
#include "cluekit/zoo.hpp"

namespace cluekit {

// Worker count: the override if set, else CLUEKIT_THREADS, else the hardware
// concurrency.
int thread_count();
// 0 clears the override.
void set_thread_count_override(int threads);

// Runs body(c) for c in [0, chunks) on thread_count() workers. Bodies must
// write only to per-chunk state; callers reduce in chunk order.
void run_chunks(std::uint64_t chunks, const std::function<void(std::uint64_t)>& body);

// Pairwise (tree) sum; the result depends only on the input order.
double pairwise_sum(std::span<const double> xs);

// Independent uniform bits for an n-coordinate configuration.
void draw_uniform_bits(Rng& rng, std::span<std::uint8_t> bits);

struct McEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  bool clamped = false;  // corrected variance was negative and set to 0
  std::uint64_t seed = 0;
  std::string generator{kGeneratorId};
};

inline constexpr std::uint64_t kOuterPerChunk = 64;

// Nested estimator of clue(f | U) on the uniform cube. Each of the N outer
// draws fixes omega_U and averages f over m independent completions of
// U^c. Var(E[f|F_U]) is estimated by A = S_between - S_within / m and Var f
// by A + S_within; the estimate is their ratio, with A clamped at 0. stderr by
// the delta method over the outer draws. Empty U gives exactly 0.
McEstimate mc_clue(const Evaluator& f, int n, SubsetMask U, std::uint64_t n_outer,
                   std::uint64_t m_inner, std::uint64_t seed);
// U as a coordinate list, for n beyond 64.
McEstimate mc_clue(const Evaluator& f, int n, std::span<const int> U, std::uint64_t n_outer,
                   std::uint64_t m_inner, std::uint64_t seed);

// S_between / (A + S_within) from the same draws: no within-fiber
// correction, so biased upwards by about (1 - clue) / m.
McEstimate mc_clue_uncorrected(const Evaluator& f, int n, SubsetMask U, std::uint64_t n_outer,
                               std::uint64_t m_inner, std::uint64_t seed);
McEstimate mc_clue_uncorrected(const Evaluator& f, int n, std::span<const int> U,
                               std::uint64_t n_outer, std::uint64_t m_inner, std::uint64_t seed);

// Cov(f(omega), f(omega^{1-p})) / Var f from N pairs; each bit of the second
// point is kept with probability p and resampled otherwise.
McEstimate mc_stability(const Evaluator& f, int n, double p, std::uint64_t n_pairs,
                        std::uint64_t seed);

// Average of mc_clue over N_sets independent Bernoulli(p) masks. stderr from
// the spread over masks.
McEstimate mc_expected_clue_bernoulli(const Evaluator& f, int n, double p, std::uint64_t n_sets,
                                      std::uint64_t n_outer, std::uint64_t m_inner,
                                      std::uint64_t seed);

}  // namespace cluekit
