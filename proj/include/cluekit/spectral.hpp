#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cluekit/core.hpp"
#include "cluekit/rng.hpp"

namespace cluekit {

// Fourier-Walsh coefficients on the uniform hypercube, indexed by subset
// mask: f = sum_S coeffs[S] chi_S with chi_S(omega) = prod_{i in S} omega_i.
struct FourierExpansion {
  int n = 0;
  std::vector<double> coeffs;
};

// Efron-Stein component norms ||f^{=S}||^2, indexed by mask. Full component
// tables are present only when materialized.
struct EfronSteinComponents {
  int n = 0;
  std::vector<double> norms;
  std::optional<std::vector<FunctionTable>> components;
};

// Distribution of the spectral sample. When conditioned, mass[empty] = 0 and
// the rest is normalized by Var(f); otherwise by E[f^2].
struct SpectralDistribution {
  int n = 0;
  std::vector<double> mass;
  bool conditioned = false;
};

// W_k = sum_{|S| = k} fhat(S)^2, k = 0..n.
struct StabilityProfile {
  std::vector<double> level_weights;
};

using PivotalSet = SubsetMask;

// Requires q = 2 and the uniform measure; throws DomainError otherwise.
FourierExpansion walsh_hadamard(const FunctionTable& f);
FunctionTable inverse_walsh_hadamard(const FourierExpansion& expansion);

inline constexpr int kMaterializeMaxN = 10;

// Component norms by Moebius inversion of T -> E[E[f|F_T]^2] over subsets.
// With materialize = true (n <= 10 and 2^n q^n within the exact guard) the
// tables f^{=S} = sum_{L subset S} (-1)^{|S-L|} E[f|F_L] are kept as well.
EfronSteinComponents efron_stein(const FunctionTable& f, bool materialize = false);

SpectralDistribution spectral_distribution(const FourierExpansion& expansion, bool conditioned);
SpectralDistribution spectral_distribution(const EfronSteinComponents& components,
                                           bool conditioned);

// P[X = j] for X a uniform element of the nonempty spectral sample.
double spectral_marginal(const SpectralDistribution& dist, int j);
std::vector<double> spectral_marginals(const SpectralDistribution& dist);

// Inverse-CDF sampler over masks in ascending index order.
class SpectralSampler {
 public:
  explicit SpectralSampler(const SpectralDistribution& dist);
  SubsetMask draw(Rng& rng) const;

 private:
  std::vector<double> cdf_;
  std::vector<std::uint64_t> masks_;
};

SubsetMask sample_spectral(const SpectralDistribution& dist, std::uint64_t seed);

StabilityProfile stability_profile(const FourierExpansion& expansion);
StabilityProfile stability_profile(const EfronSteinComponents& components);
// Stab(p) = sum_{k >= 1} W_k p^k.
double stability(const StabilityProfile& profile, double p);

// Requires a {-1,+1}-valued table on a binary space.
PivotalSet pivotal_set(const FunctionTable& f, std::uint64_t config);

// Non-decreasing in every coordinate (exhaustive sign scan of the discrete
// derivatives).
bool is_monotone(const FunctionTable& f);

// P[omega = x, omega^{1-p} = y] on the uniform n-cube, where each bit of
// omega^{1-p} is kept with probability p and resampled otherwise.
double noise_pair_weight(int n, std::uint64_t x, std::uint64_t y, double p);

// Gauss-Legendre nodes and weights on [0,1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre_unit(int nodes);

struct CovarianceLemmaResult {
  double lhs = 0.0;  // int_0^1 E|P_f(omega) cap P_g(omega^{1-p})| dp
  double rhs = 0.0;  // Cov(f, g)
  std::vector<double> per_coordinate;  // int_0^1 P[j in both] dp
  int quadrature_nodes = 0;
};

inline constexpr int kCovarianceLemmaMaxN = 8;

// Exact joint enumeration of (omega, omega^{1-p}) at Gauss-Legendre nodes.
// Requires monotone {-1,+1}-valued f, g on the uniform cube, n <= 8.
CovarianceLemmaResult covariance_lemma_check(const FunctionTable& f, const FunctionTable& g);

// In-place subset transforms over 2^n masks.
void subset_zeta(std::vector<double>& a);
void subset_moebius(std::vector<double>& a);

}  // namespace cluekit
