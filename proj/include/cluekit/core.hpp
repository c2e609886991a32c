#pragma once

#include <bit>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "cluekit/error.hpp"

namespace cluekit {

// Largest table the exact engine will allocate (q^n configurations).
inline constexpr std::uint64_t kExactGuard = std::uint64_t{1} << 26;

// Coordinate subset of a ground set [n], n <= 64, as a bitmask.
class SubsetMask {
 public:
  constexpr SubsetMask() = default;
  constexpr explicit SubsetMask(std::uint64_t bits) : bits_(bits) {}

  static constexpr SubsetMask empty() { return SubsetMask{}; }
  static SubsetMask full(int n);
  static SubsetMask singleton(int j);
  static SubsetMask from_indices(std::span<const int> indices);

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool contains(int j) const { return (bits_ >> j) & 1u; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool is_empty() const { return bits_ == 0; }
  constexpr bool is_subset_of(SubsetMask other) const {
    return (bits_ & ~other.bits_) == 0;
  }
  SubsetMask complement(int n) const;
  // Throws DomainError when a bit >= n is set.
  void check_within(int n) const;
  std::vector<int> indices() const;

  constexpr SubsetMask operator|(SubsetMask o) const { return SubsetMask{bits_ | o.bits_}; }
  constexpr SubsetMask operator&(SubsetMask o) const { return SubsetMask{bits_ & o.bits_}; }
  constexpr SubsetMask operator^(SubsetMask o) const { return SubsetMask{bits_ ^ o.bits_}; }
  constexpr bool operator==(const SubsetMask&) const = default;

 private:
  std::uint64_t bits_ = 0;
};

// Finite product space Omega^n with an independent measure per coordinate.
// Alphabet symbols are 0..q-1; for q = 2 symbol 0 reads as -1 and symbol 1
// as +1. Configurations are indexed in mixed radix with coordinate 0 as the
// least significant digit.
class ProductSpace {
 public:
  ProductSpace(int n, int q, std::vector<std::vector<double>> measure);

  static ProductSpace uniform(int n, int q = 2);
  static ProductSpace iid(int n, std::vector<double> pi);
  // Binary space with P[coordinate i = +1] = p_plus[i].
  static ProductSpace bernoulli(std::span<const double> p_plus);

  int n() const { return n_; }
  int q() const { return q_; }
  std::span<const double> measure(int coord) const { return measure_[coord]; }
  const std::vector<std::vector<double>>& measures() const { return measure_; }

  bool is_binary() const { return q_ == 2; }
  bool is_uniform_binary() const;
  bool is_iid() const;

  bool within_guard() const;
  // q^n; throws GuardError beyond kExactGuard.
  std::uint64_t config_count() const;
  // q^i for i <= n (no guard; valid while it fits in 64 bits).
  std::uint64_t stride(int coord) const;

  std::vector<int> decode(std::uint64_t index) const;
  std::uint64_t encode(std::span<const int> digits) const;
  double probability(std::uint64_t index) const;
  // P[omega] for every configuration, in index order.
  std::vector<double> probability_table() const;

  bool operator==(const ProductSpace&) const = default;

 private:
  int n_;
  int q_;
  std::vector<std::vector<double>> measure_;
};

// Dense real-valued function on a ProductSpace.
class FunctionTable {
 public:
  FunctionTable(ProductSpace space, std::vector<double> values);

  // values[idx] = fn(digits of idx).
  template <class Fn>
  static FunctionTable generate(ProductSpace space, Fn&& fn);

  const ProductSpace& space() const { return domain_->space; }
  int n() const { return domain_->space.n(); }
  int q() const { return domain_->space.q(); }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t idx) const { return values_[idx]; }
  // P[omega] per configuration.
  std::span<const double> weights() const { return domain_->weights; }

  // Same space, new values.
  FunctionTable with_values(std::vector<double> values) const;
  FunctionTable affine(double scale, double shift) const;

  // Exactly {-1,+1}-valued or exactly {0,1}-valued.
  bool is_boolean() const;
  bool is_pm_one() const;
  bool is_zero_one() const;

 private:
  struct Domain {
    ProductSpace space;
    std::vector<double> weights;
  };
  FunctionTable(std::shared_ptr<const Domain> domain, std::vector<double> values);

  std::shared_ptr<const Domain> domain_;
  std::vector<double> values_;
};

// Distribution of a random coordinate subset, independent of the
// configuration.
class RandomSetDistribution {
 public:
  struct Atom {
    SubsetMask set;
    double probability;
  };

  RandomSetDistribution(int n, std::vector<Atom> atoms);

  // Each coordinate included independently with probability p.
  static RandomSetDistribution bernoulli(int n, double p);
  static RandomSetDistribution uniform_singletons(int n);
  static RandomSetDistribution point_mass(int n, SubsetMask set);
  // Uniform over the translates perm(U), one atom per permutation
  // (repeated images merge).
  static RandomSetDistribution translates(int n, SubsetMask set,
                                          std::span<const std::vector<int>> perms);

  int n() const { return n_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

 private:
  int n_;
  std::vector<Atom> atoms_;
};

double expectation(const FunctionTable& f);
double second_moment(const FunctionTable& f);
double variance(const FunctionTable& f);
double covariance(const FunctionTable& f, const FunctionTable& g);
// Throws DegenerateError when either variance vanishes.
double correlation(const FunctionTable& f, const FunctionTable& g);

// Var(f) <= kDegenerateRelTol * E[f^2] counts as zero variance.
inline constexpr double kDegenerateRelTol = 1e-13;
// Var(f), or DegenerateError naming `what` when the variance vanishes.
double nondegenerate_variance(const FunctionTable& f, const char* what);

// E[f | F_U] as a table on the same space. Fibers whose U-marginal has
// probability zero are set to 0 (see has_null_fibers).
FunctionTable conditional_expectation(const FunctionTable& f, SubsetMask U);
// True when some U-marginal configuration has probability zero.
bool has_null_fibers(const ProductSpace& space, SubsetMask U);

// max_j P[j in U].
double revealment(const RandomSetDistribution& dist);

// Aggregate of f over the U-marginal: for each configuration u of the
// coordinates in U (compressed mixed-radix key over U in increasing
// coordinate order), mass[u] = P[omega_U = u] and mean[u] = E[f | omega_U = u]
// (0 on null fibers).
struct FiberProjection {
  std::vector<double> mass;
  std::vector<double> mean;
};
FiberProjection project(const FunctionTable& f, SubsetMask U);

// Var(E[f | F_U]) by direct fiber sums.
double projected_variance(const FunctionTable& f, SubsetMask U);

// Calls visit(index, key) for every configuration in index order, where key is
// the compressed U-index of that configuration.
template <class Visit>
void visit_subset_keys(const ProductSpace& space, SubsetMask U, Visit&& visit);

// ---------------------------------------------------------------------------

template <class Fn>
FunctionTable FunctionTable::generate(ProductSpace space, Fn&& fn) {
  const std::uint64_t count = space.config_count();
  std::vector<double> values(count);
  std::vector<int> digits(space.n(), 0);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    values[idx] = static_cast<double>(fn(std::span<const int>(digits)));
    for (int i = 0; i < space.n(); ++i) {
      if (++digits[i] < space.q()) break;
      digits[i] = 0;
    }
  }
  return FunctionTable(std::move(space), std::move(values));
}

template <class Visit>
void visit_subset_keys(const ProductSpace& space, SubsetMask U, Visit&& visit) {
  const int n = space.n();
  const int q = space.q();
  const std::uint64_t count = space.config_count();
  std::vector<std::uint64_t> key_stride(n, 0);
  std::uint64_t s = 1;
  for (int i = 0; i < n; ++i) {
    if (U.contains(i)) {
      key_stride[i] = s;
      s *= static_cast<std::uint64_t>(q);
    }
  }
  if (q == 2) {
    // Binary fast path: the key is the bit-extract of idx over U.
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::uint64_t key = 0;
      std::uint64_t bits = idx & U.bits();
      while (bits) {
        const int b = std::countr_zero(bits);
        key |= key_stride[b];
        bits &= bits - 1;
      }
      visit(idx, key);
    }
    return;
  }
  std::vector<int> digits(n, 0);
  std::uint64_t key = 0;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    visit(idx, key);
    for (int i = 0; i < n; ++i) {
      if (++digits[i] < q) {
        key += key_stride[i];
        break;
      }
      digits[i] = 0;
      key -= static_cast<std::uint64_t>(q - 1) * key_stride[i];
    }
  }
}

}  // namespace cluekit
