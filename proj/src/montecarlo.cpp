#include "cluekit/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cluekit {

namespace {

std::atomic<int> g_thread_override{0};

// Hands out random bits 64 at a time.
class BitSource {
 public:
  explicit BitSource(Rng& rng) : rng_(rng) {}
  std::uint8_t next() {
    if (left_ == 0) {
      word_ = rng_();
      left_ = 64;
    }
    const auto b = static_cast<std::uint8_t>(word_ & 1u);
    word_ >>= 1;
    --left_;
    return b;
  }

 private:
  Rng& rng_;
  std::uint64_t word_ = 0;
  int left_ = 0;
};

double sample_variance(std::span<const double> xs, double mean) {
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - mean) * (xs[i] - mean);
  return pairwise_sum(sq) / static_cast<double>(xs.size() - 1);
}

double mean_of(std::span<const double> xs) {
  return pairwise_sum(xs) / static_cast<double>(xs.size());
}

// Per outer draw: fiber mean and unbiased within-fiber variance.
struct NestedDraws {
  std::vector<double> fiber_mean;
  std::vector<double> fiber_var;
};

// Sorted, deduplicated U and its complement in [n].
struct Split {
  std::vector<int> inside;
  std::vector<int> outside;
};

Split split_coordinates(int n, std::span<const int> U) {
  Split sp;
  sp.inside.assign(U.begin(), U.end());
  std::sort(sp.inside.begin(), sp.inside.end());
  sp.inside.erase(std::unique(sp.inside.begin(), sp.inside.end()), sp.inside.end());
  if (!sp.inside.empty() && (sp.inside.front() < 0 || sp.inside.back() >= n)) {
    throw DomainError("mc_clue: subset index out of range");
  }
  std::vector<bool> in(n, false);
  for (int u : sp.inside) in[u] = true;
  for (int i = 0; i < n; ++i) {
    if (!in[i]) sp.outside.push_back(i);
  }
  return sp;
}

NestedDraws draw_nested(const Evaluator& f, int n, const Split& sp, std::uint64_t n_outer,
                        std::uint64_t m_inner, std::uint64_t seed) {
  NestedDraws d{std::vector<double>(n_outer), std::vector<double>(n_outer)};
  const std::uint64_t chunks = (n_outer + kOuterPerChunk - 1) / kOuterPerChunk;
  run_chunks(chunks, [&](std::uint64_t c) {
    Rng rng = make_rng(seed, c);
    BitSource src(rng);
    std::vector<std::uint8_t> bits(n);
    std::vector<double> ys(m_inner);
    const std::uint64_t end = std::min(n_outer, (c + 1) * kOuterPerChunk);
    for (std::uint64_t i = c * kOuterPerChunk; i < end; ++i) {
      for (int u : sp.inside) bits[u] = src.next();
      for (std::uint64_t j = 0; j < m_inner; ++j) {
        for (int u : sp.outside) bits[u] = src.next();
        ys[j] = f(bits);
      }
      const double mu = mean_of(ys);
      d.fiber_mean[i] = mu;
      d.fiber_var[i] = sample_variance(ys, mu);
    }
  });
  return d;
}

void check_nested_args(int n, std::uint64_t n_outer, std::uint64_t m_inner) {
  if (n < 1) throw DomainError("mc_clue: n must be >= 1");
  if (n_outer < 2 || m_inner < 2) throw DomainError("mc_clue: need N_outer >= 2 and m_inner >= 2");
}

std::vector<int> mask_indices(int n, SubsetMask U) {
  if (n < 64) U.check_within(n);
  return U.indices();
}

McEstimate nested_estimate(const Evaluator& f, int n, std::span<const int> U,
                           std::uint64_t n_outer, std::uint64_t m_inner, std::uint64_t seed,
                           bool corrected) {
  check_nested_args(n, n_outer, m_inner);
  const Split sp = split_coordinates(n, U);
  McEstimate r;
  r.seed = seed;
  if (sp.inside.empty()) return r;
  const auto d = draw_nested(f, n, sp, n_outer, m_inner, seed);
  const double N = static_cast<double>(n_outer);
  const double m = static_cast<double>(m_inner);
  const double grand = mean_of(d.fiber_mean);
  const double between = sample_variance(d.fiber_mean, grand);
  const double within = mean_of(d.fiber_var);
  double A = between - within / m;
  const double total = A + within;
  if (!(total > 0.0)) throw DegenerateError("mc_clue: degenerate function (zero variance estimate)");
  const double numer = corrected ? A : between;
  r.estimate = numer / total;
  if (corrected && A < 0.0) {
    r.clamped = true;
    r.estimate = 0.0;
    A = 0.0;
  }
  // Delta method for numer / (A + S_within), per outer draw.
  std::vector<double> g(n_outer);
  for (std::uint64_t i = 0; i < n_outer; ++i) {
    const double dev = d.fiber_mean[i] - grand;
    const double between_i = N / (N - 1.0) * dev * dev;
    const double a_i = between_i - d.fiber_var[i] / m;
    const double num_i = corrected ? a_i : between_i;
    g[i] = (num_i * total - numer * (a_i + d.fiber_var[i])) / (total * total);
  }
  const double gm = mean_of(g);
  r.stderr_ = std::sqrt(std::max(0.0, sample_variance(g, gm)) / N);
  return r;
}

}  // namespace

int thread_count() {
  if (const int o = g_thread_override.load(); o > 0) return o;
  if (const char* env = std::getenv("CLUEKIT_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_thread_count_override(int threads) { g_thread_override.store(std::max(0, threads)); }

void run_chunks(std::uint64_t chunks, const std::function<void(std::uint64_t)>& body) {
  const auto workers =
      static_cast<std::uint64_t>(std::min<std::uint64_t>(thread_count(), chunks));
  if (workers <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) body(c);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto work = [&] {
    for (std::uint64_t c; (c = next.fetch_add(1)) < chunks;) {
      try {
        body(c);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(chunks);
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::uint64_t t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

void draw_uniform_bits(Rng& rng, std::span<std::uint8_t> bits) {
  BitSource src(rng);
  for (auto& b : bits) b = src.next();
}

McEstimate mc_clue(const Evaluator& f, int n, SubsetMask U, std::uint64_t n_outer,
                   std::uint64_t m_inner, std::uint64_t seed) {
  return nested_estimate(f, n, mask_indices(n, U), n_outer, m_inner, seed, true);
}

McEstimate mc_clue(const Evaluator& f, int n, std::span<const int> U, std::uint64_t n_outer,
                   std::uint64_t m_inner, std::uint64_t seed) {
  return nested_estimate(f, n, U, n_outer, m_inner, seed, true);
}

McEstimate mc_clue_uncorrected(const Evaluator& f, int n, SubsetMask U, std::uint64_t n_outer,
                               std::uint64_t m_inner, std::uint64_t seed) {
  return nested_estimate(f, n, mask_indices(n, U), n_outer, m_inner, seed, false);
}

McEstimate mc_clue_uncorrected(const Evaluator& f, int n, std::span<const int> U,
                               std::uint64_t n_outer, std::uint64_t m_inner, std::uint64_t seed) {
  return nested_estimate(f, n, U, n_outer, m_inner, seed, false);
}

McEstimate mc_stability(const Evaluator& f, int n, double p, std::uint64_t n_pairs,
                        std::uint64_t seed) {
  if (n < 1) throw DomainError("mc_stability: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("mc_stability: p must be in [0, 1]");
  if (n_pairs < 2) throw DomainError("mc_stability: need N >= 2");
  std::vector<double> x(n_pairs);
  std::vector<double> y(n_pairs);
  const std::uint64_t chunks = (n_pairs + kOuterPerChunk - 1) / kOuterPerChunk;
  run_chunks(chunks, [&](std::uint64_t c) {
    Rng rng = make_rng(seed, c);
    std::vector<std::uint8_t> a(n);
    std::vector<std::uint8_t> b(n);
    const std::uint64_t end = std::min(n_pairs, (c + 1) * kOuterPerChunk);
    for (std::uint64_t i = c * kOuterPerChunk; i < end; ++i) {
      draw_uniform_bits(rng, a);
      for (int k = 0; k < n; ++k) {
        const bool keep = uniform01(rng) < p;
        const auto fresh = static_cast<std::uint8_t>(rng() >> 63);
        b[k] = keep ? a[k] : fresh;
      }
      x[i] = f(a);
      y[i] = f(b);
    }
  });
  const double N = static_cast<double>(n_pairs);
  const double mu = 0.5 * (mean_of(x) + mean_of(y));
  std::vector<double> cs(n_pairs);
  std::vector<double> vs(n_pairs);
  for (std::uint64_t i = 0; i < n_pairs; ++i) {
    const double dx = x[i] - mu;
    const double dy = y[i] - mu;
    cs[i] = dx * dy;
    vs[i] = 0.5 * (dx * dx + dy * dy);
  }
  const double C = mean_of(cs);
  const double V = mean_of(vs);
  if (!(V > 0.0)) throw DegenerateError("mc_stability: degenerate function (zero variance estimate)");
  McEstimate r;
  r.seed = seed;
  r.estimate = C / V;
  std::vector<double> g(n_pairs);
  for (std::uint64_t i = 0; i < n_pairs; ++i) g[i] = (cs[i] - r.estimate * vs[i]) / V;
  r.stderr_ = std::sqrt(sample_variance(g, mean_of(g)) / N);
  return r;
}

McEstimate mc_expected_clue_bernoulli(const Evaluator& f, int n, double p, std::uint64_t n_sets,
                                      std::uint64_t n_outer, std::uint64_t m_inner,
                                      std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("mc_expected_clue_bernoulli: p must be in [0, 1]");
  if (n_sets < 2) throw DomainError("mc_expected_clue_bernoulli: need N_sets >= 2");
  check_nested_args(n, n_outer, m_inner);
  Rng set_rng = make_rng(seed, ~std::uint64_t{0});
  std::vector<double> vals(n_sets);
  McEstimate r;
  r.seed = seed;
  for (std::uint64_t s = 0; s < n_sets; ++s) {
    std::vector<int> U;
    for (int k = 0; k < n; ++k) {
      if (uniform01(set_rng) < p) U.push_back(k);
    }
    const auto est = mc_clue(f, n, std::span<const int>(U), n_outer, m_inner, derive_seed(seed, s));
    vals[s] = est.estimate;
    r.clamped = r.clamped || est.clamped;
  }
  r.estimate = mean_of(vals);
  r.stderr_ = std::sqrt(sample_variance(vals, r.estimate) / static_cast<double>(n_sets));
  return r;
}

}  // namespace cluekit
