#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cluekit/core.hpp"
#include "cluekit/zoo.hpp"

namespace cluekit {

// Bond percolation on a w x h grid of vertices. Horizontal edge (x,y)-(x+1,y)
// has index y (w-1) + x; vertical edge (x,y)-(x,y+1) has index
// (w-1) h + y w + x.
struct RectangleSpec {
  int w = 0;
  int h = 0;

  RectangleSpec(int w, int h);
  int edge_count() const { return (w - 1) * h + w * (h - 1); }
  bool self_dual() const { return w == h + 1; }
  int horizontal(int x, int y) const { return y * (w - 1) + x; }
  int vertical(int x, int y) const { return (w - 1) * h + y * w + x; }
};

// open[e] != 0 means edge e is open.
using EdgeConfig = std::span<const std::uint8_t>;

// Open path joining column 0 to column w-1 (both columns wired).
bool lr_crossing(EdgeConfig open, const RectangleSpec& R);
// Closed dual path joining the outer face above the top row to the outer
// face below the bottom row.
bool dual_crossing(EdgeConfig open, const RectangleSpec& R);

inline constexpr int kCrossingExactMaxEdges = 22;

struct CrossingProbability {
  std::uint64_t crossing = 0;
  std::uint64_t total = 0;
  double probability() const { return static_cast<double>(crossing) / static_cast<double>(total); }
};

// Exhaustive count at p = 1/2; edge count <= 22.
CrossingProbability crossing_probability_exact(const RectangleSpec& R);

// Side-n torus with 2 n^2 edges: h(x,y) = y n + x joins (x,y)-(x+1,y) and
// v(x,y) = n^2 + y n + x joins (x,y)-(x,y+1), coordinates mod n. The
// embedded rectangle has w = n, h = n - 1 vertices at 0 <= x < n, 0 <= y < n-1
// and uses the non-wrapping edges among them.
struct TorusSpec {
  int n = 0;

  explicit TorusSpec(int n);
  int edge_count() const { return 2 * n * n; }
  int h_edge(int x, int y) const { return ((y % n + n) % n) * n + (x % n + n) % n; }
  int v_edge(int x, int y) const { return n * n + h_edge(x, y); }
  RectangleSpec rectangle() const { return RectangleSpec(n, n - 1); }
  // Torus index of every rectangle edge, in rectangle edge order.
  std::vector<int> rectangle_edges() const;
  SubsetMask rectangle_mask() const;
};

// {-1,+1}-valued LR crossing of the embedded rectangle, as a function of all
// torus edges; the extra edges are ignored.
ZooFunction torus_lr(const TorusSpec& T);

inline constexpr int kTorusExactMaxEdges = 20;
// Exact table on the uniform cube; 2 n^2 <= 20.
FunctionTable torus_lr_table(const TorusSpec& T);

// Torus translation by (dx, dy) as an edge permutation.
Permutation torus_translation(const TorusSpec& T, int dx, int dy);
// All n^2 translations.
std::vector<Permutation> torus_translation_group(const TorusSpec& T);

struct AveragedClueBound {
  double clue = 0.0;
  double bound = 0.0;  // 2 |U| / n^2
  bool holds = true;
};

// Averaged crossing M[LR] over all n^2 translations, exact (n = 3).
FunctionTable averaged_crossing_table(const TorusSpec& T);
AveragedClueBound averaged_crossing_clue_bound(const FunctionTable& averaged, const TorusSpec& T,
                                               SubsetMask U, double tol = 1e-9);
AveragedClueBound averaged_crossing_clue_bound(const TorusSpec& T, SubsetMask U,
                                               double tol = 1e-9);

struct ProportionEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  double ci_low = 0.0;   // Wilson 95% interval
  double ci_high = 0.0;
  std::uint64_t successes = 0;
  std::uint64_t samples = 0;
};

// Wilson score interval at z.
ProportionEstimate wilson(std::uint64_t successes, std::uint64_t samples, double z = 1.96);

// P[LR != LR^d] on the side-n torus at p = 1/2, where LR^d is the crossing of
// the rectangle translated by d.
ProportionEstimate translate_disagreement(int n, int dx, int dy, std::uint64_t samples,
                                          std::uint64_t seed);

// Monte Carlo P[LR] at p = 1/2.
ProportionEstimate mc_crossing_probability(const RectangleSpec& R, std::uint64_t samples,
                                           std::uint64_t seed);

}  // namespace cluekit
