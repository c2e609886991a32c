#include "cluekit/perco.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "cluekit/clue.hpp"
#include "cluekit/montecarlo.hpp"
#include "cluekit/symmetry.hpp"

namespace cluekit {

namespace {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[a] = b;
  }

 private:
  std::vector<int> parent_;
};

constexpr std::uint64_t kSamplesPerChunk = 4096;

ProportionEstimate count_chunks(std::uint64_t samples, std::uint64_t seed,
                                const std::function<bool(Rng&)>& trial) {
  const std::uint64_t chunks = (samples + kSamplesPerChunk - 1) / kSamplesPerChunk;
  std::vector<std::uint64_t> hits(chunks, 0);
  run_chunks(chunks, [&](std::uint64_t c) {
    Rng rng = make_rng(seed, c);
    const std::uint64_t end = std::min(samples, (c + 1) * kSamplesPerChunk);
    for (std::uint64_t s = c * kSamplesPerChunk; s < end; ++s) hits[c] += trial(rng) ? 1 : 0;
  });
  return wilson(std::accumulate(hits.begin(), hits.end(), std::uint64_t{0}), samples);
}

}  // namespace

RectangleSpec::RectangleSpec(int w_, int h_) : w(w_), h(h_) {
  if (w < 1 || h < 1) throw DomainError("rectangle: w and h must be >= 1");
}

bool lr_crossing(EdgeConfig open, const RectangleSpec& R) {
  if (static_cast<int>(open.size()) != R.edge_count()) {
    throw DomainError("lr_crossing: configuration size differs from edge count");
  }
  const int left = R.w * R.h;
  const int right = left + 1;
  UnionFind uf(left + 2);
  auto vid = [&](int x, int y) { return y * R.w + x; };
  for (int y = 0; y < R.h; ++y) {
    uf.unite(vid(0, y), left);
    uf.unite(vid(R.w - 1, y), right);
  }
  for (int y = 0; y < R.h; ++y) {
    for (int x = 0; x + 1 < R.w; ++x) {
      if (open[R.horizontal(x, y)]) uf.unite(vid(x, y), vid(x + 1, y));
    }
  }
  for (int y = 0; y + 1 < R.h; ++y) {
    for (int x = 0; x < R.w; ++x) {
      if (open[R.vertical(x, y)]) uf.unite(vid(x, y), vid(x, y + 1));
    }
  }
  return uf.find(left) == uf.find(right) && R.w >= 2;
}

bool dual_crossing(EdgeConfig open, const RectangleSpec& R) {
  if (static_cast<int>(open.size()) != R.edge_count()) {
    throw DomainError("dual_crossing: configuration size differs from edge count");
  }
  // Faces (x, y) for x < w-1, y < h-1, plus the two outer faces.
  const int fw = R.w - 1;
  const int faces = fw * (R.h - 1);
  const int bottom = faces;
  const int top = faces + 1;
  UnionFind uf(faces + 2);
  auto face = [&](int x, int y) { return y * fw + x; };
  for (int y = 0; y < R.h; ++y) {
    for (int x = 0; x < fw; ++x) {
      if (open[R.horizontal(x, y)]) continue;
      const int below = y == 0 ? bottom : face(x, y - 1);
      const int above = y == R.h - 1 ? top : face(x, y);
      uf.unite(below, above);
    }
  }
  for (int y = 0; y + 1 < R.h; ++y) {
    for (int x = 1; x + 1 < R.w; ++x) {
      if (!open[R.vertical(x, y)]) uf.unite(face(x - 1, y), face(x, y));
    }
  }
  return uf.find(bottom) == uf.find(top);
}

CrossingProbability crossing_probability_exact(const RectangleSpec& R) {
  const int e = R.edge_count();
  if (e > kCrossingExactMaxEdges) {
    throw GuardError("crossing_probability_exact: " + std::to_string(e) + " edges exceeds " +
                     std::to_string(kCrossingExactMaxEdges));
  }
  CrossingProbability out;
  out.total = std::uint64_t{1} << e;
  std::vector<std::uint8_t> open(e);
  for (std::uint64_t c = 0; c < out.total; ++c) {
    for (int i = 0; i < e; ++i) open[i] = (c >> i) & 1u;
    out.crossing += lr_crossing(open, R) ? 1 : 0;
  }
  return out;
}

TorusSpec::TorusSpec(int n_) : n(n_) {
  if (n < 2 || 2 * n * n > 64 * 64) throw DomainError("torus: side must be >= 2");
}

std::vector<int> TorusSpec::rectangle_edges() const {
  const auto R = rectangle();
  std::vector<int> out(R.edge_count());
  for (int y = 0; y < R.h; ++y) {
    for (int x = 0; x + 1 < R.w; ++x) out[R.horizontal(x, y)] = h_edge(x, y);
  }
  for (int y = 0; y + 1 < R.h; ++y) {
    for (int x = 0; x < R.w; ++x) out[R.vertical(x, y)] = v_edge(x, y);
  }
  return out;
}

SubsetMask TorusSpec::rectangle_mask() const {
  if (edge_count() > 64) throw DomainError("torus: edge mask needs 2 n^2 <= 64");
  std::uint64_t m = 0;
  for (int e : rectangle_edges()) m |= std::uint64_t{1} << e;
  return SubsetMask{m};
}

ZooFunction torus_lr(const TorusSpec& T) {
  ZooFunction z;
  z.name = "torus-lr:" + std::to_string(T.n);
  z.n = T.edge_count();
  const auto edges = T.rectangle_edges();
  const auto R = T.rectangle();
  z.eval = [edges, R](std::span<const std::uint8_t> bits) {
    std::vector<std::uint8_t> open(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) open[i] = bits[edges[i]];
    return lr_crossing(open, R) ? 1.0 : -1.0;
  };
  const int side = T.n;
  z.group = [side] { return GroupAction::torus_translations(side); };
  return z;
}

FunctionTable torus_lr_table(const TorusSpec& T) {
  if (T.edge_count() > kTorusExactMaxEdges) {
    throw GuardError("torus_lr_table: " + std::to_string(T.edge_count()) + " edges exceeds " +
                     std::to_string(kTorusExactMaxEdges));
  }
  return torus_lr(T).table();
}

Permutation torus_translation(const TorusSpec& T, int dx, int dy) {
  Permutation p(T.edge_count());
  for (int y = 0; y < T.n; ++y) {
    for (int x = 0; x < T.n; ++x) {
      p[T.h_edge(x, y)] = T.h_edge(x + dx, y + dy);
      p[T.v_edge(x, y)] = T.v_edge(x + dx, y + dy);
    }
  }
  return p;
}

std::vector<Permutation> torus_translation_group(const TorusSpec& T) {
  std::vector<Permutation> out;
  for (int dy = 0; dy < T.n; ++dy) {
    for (int dx = 0; dx < T.n; ++dx) out.push_back(torus_translation(T, dx, dy));
  }
  return out;
}

FunctionTable averaged_crossing_table(const TorusSpec& T) {
  return average(torus_lr_table(T), torus_translation_group(T));
}

AveragedClueBound averaged_crossing_clue_bound(const FunctionTable& averaged, const TorusSpec& T,
                                               SubsetMask U, double tol) {
  AveragedClueBound r;
  r.clue = clue(averaged, U);
  r.bound = 2.0 * U.size() / (T.n * T.n);
  r.holds = r.clue <= r.bound + tol;
  return r;
}

AveragedClueBound averaged_crossing_clue_bound(const TorusSpec& T, SubsetMask U, double tol) {
  return averaged_crossing_clue_bound(averaged_crossing_table(T), T, U, tol);
}

ProportionEstimate wilson(std::uint64_t successes, std::uint64_t samples, double z) {
  if (samples == 0) throw DomainError("wilson: no samples");
  ProportionEstimate r;
  r.successes = successes;
  r.samples = samples;
  const double N = static_cast<double>(samples);
  const double p = successes / N;
  r.estimate = p;
  r.stderr_ = std::sqrt(p * (1.0 - p) / N);
  const double z2 = z * z;
  const double denom = 1.0 + z2 / N;
  const double center = (p + z2 / (2.0 * N)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / N + z2 / (4.0 * N * N));
  r.ci_low = std::max(0.0, center - half);
  r.ci_high = std::min(1.0, center + half);
  return r;
}

ProportionEstimate translate_disagreement(int n, int dx, int dy, std::uint64_t samples,
                                          std::uint64_t seed) {
  const TorusSpec T(n);
  const auto R = T.rectangle();
  const auto base = T.rectangle_edges();
  const auto shift = torus_translation(T, dx, dy);
  std::vector<int> moved(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) moved[i] = shift[base[i]];
  return count_chunks(samples, seed, [&](Rng& rng) {
    std::vector<std::uint8_t> bits(T.edge_count());
    draw_uniform_bits(rng, bits);
    std::vector<std::uint8_t> a(base.size());
    std::vector<std::uint8_t> b(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      a[i] = bits[base[i]];
      b[i] = bits[moved[i]];
    }
    return lr_crossing(a, R) != lr_crossing(b, R);
  });
}

ProportionEstimate mc_crossing_probability(const RectangleSpec& R, std::uint64_t samples,
                                           std::uint64_t seed) {
  return count_chunks(samples, seed, [&](Rng& rng) {
    std::vector<std::uint8_t> open(R.edge_count());
    draw_uniform_bits(rng, open);
    return lr_crossing(open, R);
  });
}

}  // namespace cluekit
