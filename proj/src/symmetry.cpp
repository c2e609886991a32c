#include "cluekit/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

namespace cluekit {

Permutation identity_permutation(int n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  Permutation out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = a[b[i]];
  return out;
}

Permutation inverse(const Permutation& p) {
  Permutation out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[p[i]] = static_cast<int>(i);
  return out;
}

bool is_permutation(const Permutation& p, int n) {
  if (static_cast<int>(p.size()) != n) return false;
  std::vector<bool> seen(n, false);
  for (int x : p) {
    if (x < 0 || x >= n || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

GroupAction::GroupAction(int n, std::vector<Permutation> generators)
    : n_(n), generators_(std::move(generators)) {
  if (n < 0) throw DomainError("group action: n must be >= 0");
  for (const auto& g : generators_) {
    if (!is_permutation(g, n)) throw DomainError("group action: generator is not a permutation");
  }
}

GroupAction GroupAction::from_elements(int n, std::vector<Permutation> elements) {
  std::set<Permutation> set(elements.begin(), elements.end());
  if (!set.contains(identity_permutation(n))) {
    throw DomainError("group action: element list lacks the identity");
  }
  for (const auto& a : elements) {
    if (!is_permutation(a, n)) throw DomainError("group action: element is not a permutation");
  }
  for (const auto& a : set) {
    for (const auto& b : set) {
      if (!set.contains(compose(a, b))) {
        throw DomainError("group action: element list is not closed under composition");
      }
    }
  }
  GroupAction g(n, std::vector<Permutation>(set.begin(), set.end()));
  g.elements_ = g.generators_;
  return g;
}

GroupAction GroupAction::trivial(int n) { return GroupAction(n, {}); }

GroupAction GroupAction::cyclic(int n) {
  if (n < 1) throw DomainError("cyclic group: n must be >= 1");
  Permutation shift(n);
  for (int i = 0; i < n; ++i) shift[i] = (i + 1) % n;
  return GroupAction(n, {shift});
}

GroupAction GroupAction::dihedral(int n) {
  if (n < 1) throw DomainError("dihedral group: n must be >= 1");
  Permutation shift(n);
  Permutation flip(n);
  for (int i = 0; i < n; ++i) {
    shift[i] = (i + 1) % n;
    flip[i] = (n - i) % n;
  }
  return GroupAction(n, {shift, flip});
}

GroupAction GroupAction::symmetric(int n) {
  if (n < 1) throw DomainError("symmetric group: n must be >= 1");
  if (n == 1) return trivial(1);
  Permutation swap = identity_permutation(n);
  std::swap(swap[0], swap[1]);
  Permutation shift(n);
  for (int i = 0; i < n; ++i) shift[i] = (i + 1) % n;
  return GroupAction(n, {swap, shift});
}

GroupAction GroupAction::torus_translations(int side) {
  if (side < 1) throw DomainError("torus translations: side must be >= 1");
  const int nn = side * side;
  Permutation tx(2 * nn);
  Permutation ty(2 * nn);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const int e = y * side + x;
      const int ex = y * side + (x + 1) % side;
      const int ey = ((y + 1) % side) * side + x;
      tx[e] = ex;
      tx[nn + e] = nn + ex;
      ty[e] = ey;
      ty[nn + e] = nn + ey;
    }
  }
  return GroupAction(2 * nn, {tx, ty});
}

GroupAction GroupAction::tribes(int l, int k) {
  if (l < 1 || k < 1) throw DomainError("tribes group: need l, k >= 1");
  const int n = l * k;
  std::vector<Permutation> gens;
  if (l >= 2) {
    Permutation swap = identity_permutation(n);
    std::swap(swap[0], swap[1]);
    Permutation cyc = identity_permutation(n);
    for (int i = 0; i < l; ++i) cyc[i] = (i + 1) % l;
    gens.push_back(swap);
    if (l >= 3) gens.push_back(cyc);
  }
  if (k >= 2) {
    Permutation swap = identity_permutation(n);
    for (int i = 0; i < l; ++i) std::swap(swap[i], swap[l + i]);
    Permutation cyc(n);
    for (int t = 0; t < k; ++t) {
      for (int i = 0; i < l; ++i) cyc[t * l + i] = ((t + 1) % k) * l + i;
    }
    gens.push_back(swap);
    if (k >= 3) gens.push_back(cyc);
  }
  return GroupAction(n, gens);
}

const std::vector<Permutation>& GroupAction::elements() const {
  if (!elements_.empty()) return elements_;
  std::set<Permutation> seen{identity_permutation(n_)};
  std::vector<Permutation> frontier{identity_permutation(n_)};
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const auto& a : frontier) {
      for (const auto& g : generators_) {
        auto b = compose(g, a);
        if (seen.insert(b).second) {
          if (seen.size() > kGroupClosureCap) {
            throw GuardError("group closure exceeds " + std::to_string(kGroupClosureCap) +
                             " elements");
          }
          next.push_back(std::move(b));
        }
      }
    }
    frontier = std::move(next);
  }
  elements_.assign(seen.begin(), seen.end());
  return elements_;
}

std::vector<std::vector<int>> GroupAction::orbits() const {
  std::vector<int> parent(n_);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& g : generators_) {
    for (int i = 0; i < n_; ++i) {
      const int a = find(i);
      const int b = find(g[i]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<std::vector<int>> out;
  std::vector<int> slot(n_, -1);
  for (int i = 0; i < n_; ++i) {
    const int r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[slot[r]].push_back(i);
  }
  return out;
}

bool GroupAction::is_transitive() const { return n_ <= 1 || orbits().size() == 1; }

std::uint64_t permute_config(const ProductSpace& space, std::uint64_t index,
                             const Permutation& gamma) {
  if (space.is_binary()) {
    std::uint64_t out = 0;
    while (index) {
      const int b = std::countr_zero(index);
      out |= std::uint64_t{1} << gamma[b];
      index &= index - 1;
    }
    return out;
  }
  const auto digits = space.decode(index);
  std::vector<int> moved(digits.size());
  for (std::size_t u = 0; u < digits.size(); ++u) moved[gamma[u]] = digits[u];
  return space.encode(moved);
}

SubsetMask permute_subset(SubsetMask U, const Permutation& gamma) {
  std::uint64_t out = 0;
  for (int u : U.indices()) {
    if (gamma[u] >= 64) throw DomainError("permute_subset: image beyond 64 coordinates");
    out |= std::uint64_t{1} << gamma[u];
  }
  return SubsetMask{out};
}

bool is_invariant(const FunctionTable& f, const GroupAction& action, double tol) {
  if (action.n() != f.n()) throw DomainError("is_invariant: action and function sizes differ");
  const auto& space = f.space();
  for (const auto& g : action.generators()) {
    for (int i = 0; i < f.n(); ++i) {
      const auto a = space.measure(i);
      const auto b = space.measure(g[i]);
      if (!std::equal(a.begin(), a.end(), b.begin())) return false;
    }
    for (std::uint64_t x = 0; x < f.size(); ++x) {
      if (std::abs(f[permute_config(space, x, g)] - f[x]) > tol) return false;
    }
  }
  return true;
}

FunctionTable average(const FunctionTable& f, std::span<const Permutation> H) {
  if (H.empty()) throw DomainError("average: empty element list");
  for (const auto& g : H) {
    if (!is_permutation(g, f.n())) throw DomainError("average: element is not a permutation");
  }
  std::vector<double> out(f.size(), 0.0);
  for (const auto& g : H) {
    for (std::uint64_t x = 0; x < f.size(); ++x) out[x] += f[permute_config(f.space(), x, g)];
  }
  const double inv = 1.0 / static_cast<double>(H.size());
  for (double& v : out) v *= inv;
  return f.with_values(std::move(out));
}

SubsetMask subset_orbit_union(SubsetMask U, std::span<const Permutation> H) {
  SubsetMask out = SubsetMask::empty();
  for (const auto& g : H) out = out | permute_subset(U, g);
  return out;
}

}  // namespace cluekit
