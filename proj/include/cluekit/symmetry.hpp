#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cluekit/core.hpp"

namespace cluekit {

// Bijection of [n]: perm[i] is the image of coordinate i.
using Permutation = std::vector<int>;

Permutation identity_permutation(int n);
// (a o b)(i) = a[b[i]].
Permutation compose(const Permutation& a, const Permutation& b);
Permutation inverse(const Permutation& p);
bool is_permutation(const Permutation& p, int n);

inline constexpr std::size_t kGroupClosureCap = 1'000'000;

// Permutation group on [n] given by generators. The element list is computed
// by closure on first request and cached; invariance and orbit queries only
// touch the generators.
class GroupAction {
 public:
  GroupAction(int n, std::vector<Permutation> generators);

  // Explicit element list; throws DomainError unless it is a group.
  static GroupAction from_elements(int n, std::vector<Permutation> elements);

  static GroupAction trivial(int n);
  static GroupAction cyclic(int n);
  static GroupAction dihedral(int n);
  static GroupAction symmetric(int n);
  // Translations of the side-n torus acting on its 2 n^2 edges
  // (h(x,y) = y n + x, v(x,y) = n^2 + y n + x).
  static GroupAction torus_translations(int side);
  // S_l inside each of the k tribes and S_k permuting the tribes; tribe t
  // occupies coordinates t l .. t l + l - 1.
  static GroupAction tribes(int l, int k);

  int n() const { return n_; }
  const std::vector<Permutation>& generators() const { return generators_; }
  // Throws GuardError when the closure exceeds kGroupClosureCap.
  const std::vector<Permutation>& elements() const;

  std::vector<std::vector<int>> orbits() const;
  bool is_transitive() const;

 private:
  int n_;
  std::vector<Permutation> generators_;
  mutable std::vector<Permutation> elements_;
};

// Index of omega^gamma, where (omega^gamma)_{gamma(u)} = omega_u.
std::uint64_t permute_config(const ProductSpace& space, std::uint64_t index,
                             const Permutation& gamma);
// {gamma(u) : u in U}.
SubsetMask permute_subset(SubsetMask U, const Permutation& gamma);

// f(omega^gamma) = f(omega) within tol for every generator and omega. The
// measure must be invariant as well.
bool is_invariant(const FunctionTable& f, const GroupAction& action, double tol = 1e-12);

// (1/|H|) sum_{gamma in H} f^gamma with f^gamma(omega) = f(omega^gamma).
FunctionTable average(const FunctionTable& f, std::span<const Permutation> H);

// Union of gamma(U) over gamma in H.
SubsetMask subset_orbit_union(SubsetMask U, std::span<const Permutation> H);

}  // namespace cluekit
