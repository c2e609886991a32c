#include "cluekit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace cluekit {

namespace {

void require_uniform_binary(const ProductSpace& space, const char* what) {
  if (!space.is_uniform_binary()) {
    throw DomainError(std::string(what) +
                      ": requires the uniform binary measure (use efron_stein)");
  }
}

// Butterfly a[S] <- sum_x a[x] (-1)^{|S & x|}.
void hadamard_butterfly(std::vector<double>& a) {
  const std::size_t size = a.size();
  for (std::size_t h = 1; h < size; h <<= 1) {
    for (std::size_t i = 0; i < size; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double u = a[j];
        const double v = a[j + h];
        a[j] = u + v;
        a[j + h] = u - v;
      }
    }
  }
}

double clamp_mass(double m, double tol, const char* what) {
  if (m >= 0.0) return m;
  if (m >= -tol) return 0.0;
  throw DomainError(std::string(what) + ": negative spectral mass " + std::to_string(m) +
                    " (is the measure a product measure?)");
}

}  // namespace

void subset_zeta(std::vector<double>& a) {
  for (std::size_t h = 1; h < a.size(); h <<= 1) {
    for (std::size_t m = 0; m < a.size(); ++m) {
      if (m & h) a[m] += a[m ^ h];
    }
  }
}

void subset_moebius(std::vector<double>& a) {
  for (std::size_t h = 1; h < a.size(); h <<= 1) {
    for (std::size_t m = 0; m < a.size(); ++m) {
      if (m & h) a[m] -= a[m ^ h];
    }
  }
}

FourierExpansion walsh_hadamard(const FunctionTable& f) {
  require_uniform_binary(f.space(), "walsh_hadamard");
  std::vector<double> a(f.values().begin(), f.values().end());
  hadamard_butterfly(a);
  const double scale = 1.0 / static_cast<double>(a.size());
  // chi_S(x) = (-1)^{|S|} (-1)^{|S & x|} with symbol 1 read as +1.
  for (std::size_t s = 0; s < a.size(); ++s) {
    a[s] *= (std::popcount(s) & 1) ? -scale : scale;
  }
  return FourierExpansion{f.n(), std::move(a)};
}

FunctionTable inverse_walsh_hadamard(const FourierExpansion& expansion) {
  std::vector<double> b(expansion.coeffs);
  for (std::size_t s = 0; s < b.size(); ++s) {
    if (std::popcount(s) & 1) b[s] = -b[s];
  }
  hadamard_butterfly(b);
  return FunctionTable(ProductSpace::uniform(expansion.n), std::move(b));
}

EfronSteinComponents efron_stein(const FunctionTable& f, bool materialize) {
  const int n = f.n();
  if (n > 26) throw GuardError("efron_stein: more than 2^26 subsets");
  const std::size_t subsets = std::size_t{1} << n;
  if (materialize) {
    if (n > kMaterializeMaxN) {
      throw GuardError("efron_stein: component tables are limited to n <= 10");
    }
    if (static_cast<double>(subsets) * static_cast<double>(f.size()) >
        static_cast<double>(kExactGuard)) {
      throw GuardError("efron_stein: 2^n * q^n component entries exceed the exact guard");
    }
  }

  // g(T) = E[E[f|F_T]^2]; its Moebius inverse is ||f^{=S}||^2.
  std::vector<double> norms(subsets);
  for (std::size_t t = 0; t < subsets; ++t) {
    const auto proj = project(f, SubsetMask{t});
    double s = 0.0;
    for (std::size_t k = 0; k < proj.mass.size(); ++k) {
      s += proj.mass[k] * proj.mean[k] * proj.mean[k];
    }
    norms[t] = s;
  }
  const double tol = 1e-12 * std::max(1.0, norms[subsets - 1]);
  subset_moebius(norms);
  for (auto& m : norms) m = clamp_mass(m, tol, "efron_stein");

  EfronSteinComponents out{n, std::move(norms), std::nullopt};
  if (materialize) {
    std::vector<std::vector<double>> tables(subsets);
    for (std::size_t t = 0; t < subsets; ++t) {
      const auto ce = conditional_expectation(f, SubsetMask{t});
      tables[t].assign(ce.values().begin(), ce.values().end());
    }
    for (std::size_t h = 1; h < subsets; h <<= 1) {
      for (std::size_t m = 0; m < subsets; ++m) {
        if (!(m & h)) continue;
        auto& dst = tables[m];
        const auto& src = tables[m ^ h];
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] -= src[i];
      }
    }
    std::vector<FunctionTable> components;
    components.reserve(subsets);
    for (auto& t : tables) components.push_back(f.with_values(std::move(t)));
    out.components = std::move(components);
  }
  return out;
}

namespace {

SpectralDistribution normalize(int n, std::vector<double> weights, bool conditioned,
                               const char* what) {
  double nonempty = 0.0;
  for (std::size_t s = 1; s < weights.size(); ++s) nonempty += weights[s];
  const double full = nonempty + weights[0];
  const double total = conditioned ? nonempty : full;
  if (!(total > 0.0) || (conditioned && nonempty <= kDegenerateRelTol * full)) {
    throw DegenerateError(std::string(what) + ": degenerate function (no nonempty spectral mass)");
  }
  if (conditioned) weights[0] = 0.0;
  for (auto& w : weights) w /= total;
  return SpectralDistribution{n, std::move(weights), conditioned};
}

}  // namespace

SpectralDistribution spectral_distribution(const FourierExpansion& expansion, bool conditioned) {
  std::vector<double> w(expansion.coeffs.size());
  std::transform(expansion.coeffs.begin(), expansion.coeffs.end(), w.begin(),
                 [](double c) { return c * c; });
  return normalize(expansion.n, std::move(w), conditioned, "spectral_distribution");
}

SpectralDistribution spectral_distribution(const EfronSteinComponents& components,
                                           bool conditioned) {
  return normalize(components.n, components.norms, conditioned, "spectral_distribution");
}

double spectral_marginal(const SpectralDistribution& dist, int j) {
  if (!dist.conditioned) {
    throw DomainError("spectral_marginal: requires the distribution conditioned on nonempty");
  }
  if (j < 0 || j >= dist.n) throw DomainError("spectral_marginal: coordinate out of range");
  double p = 0.0;
  for (std::size_t s = 1; s < dist.mass.size(); ++s) {
    if ((s >> j) & 1u) p += dist.mass[s] / std::popcount(s);
  }
  return p;
}

std::vector<double> spectral_marginals(const SpectralDistribution& dist) {
  std::vector<double> out(dist.n);
  for (int j = 0; j < dist.n; ++j) out[j] = spectral_marginal(dist, j);
  return out;
}

SpectralSampler::SpectralSampler(const SpectralDistribution& dist) {
  double acc = 0.0;
  for (std::size_t s = 0; s < dist.mass.size(); ++s) {
    if (dist.mass[s] > 0.0) {
      acc += dist.mass[s];
      cdf_.push_back(acc);
      masks_.push_back(s);
    }
  }
  if (masks_.empty()) throw DomainError("SpectralSampler: empty distribution");
}

SubsetMask SpectralSampler::draw(Rng& rng) const {
  const double u = uniform01(rng) * cdf_.back();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const std::size_t pos = std::min<std::size_t>(it - cdf_.begin(), masks_.size() - 1);
  return SubsetMask{masks_[pos]};
}

SubsetMask sample_spectral(const SpectralDistribution& dist, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return SpectralSampler(dist).draw(rng);
}

StabilityProfile stability_profile(const FourierExpansion& expansion) {
  StabilityProfile p{std::vector<double>(expansion.n + 1, 0.0)};
  for (std::size_t s = 0; s < expansion.coeffs.size(); ++s) {
    p.level_weights[std::popcount(s)] += expansion.coeffs[s] * expansion.coeffs[s];
  }
  return p;
}

StabilityProfile stability_profile(const EfronSteinComponents& components) {
  StabilityProfile p{std::vector<double>(components.n + 1, 0.0)};
  for (std::size_t s = 0; s < components.norms.size(); ++s) {
    p.level_weights[std::popcount(s)] += components.norms[s];
  }
  return p;
}

double stability(const StabilityProfile& profile, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("stability: p outside [0,1]");
  double s = 0.0;
  double pk = 1.0;
  for (std::size_t k = 1; k < profile.level_weights.size(); ++k) {
    pk *= p;
    s += profile.level_weights[k] * pk;
  }
  return s;
}

PivotalSet pivotal_set(const FunctionTable& f, std::uint64_t config) {
  if (!f.space().is_binary() || !f.is_pm_one()) {
    throw DomainError("pivotal_set: requires a {-1,+1}-valued function on a binary space");
  }
  if (config >= f.size()) throw DomainError("pivotal_set: configuration out of range");
  std::uint64_t mask = 0;
  for (int j = 0; j < f.n(); ++j) {
    if (f[config] != f[config ^ (std::uint64_t{1} << j)]) mask |= std::uint64_t{1} << j;
  }
  return SubsetMask{mask};
}

bool is_monotone(const FunctionTable& f) {
  if (!f.space().is_binary()) throw DomainError("is_monotone: requires a binary space");
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    for (int j = 0; j < f.n(); ++j) {
      const std::uint64_t bit = std::uint64_t{1} << j;
      if (!(x & bit) && f[x] > f[x | bit]) return false;
    }
  }
  return true;
}

double noise_pair_weight(int n, std::uint64_t x, std::uint64_t y, double p) {
  const int d = std::popcount(x ^ y);
  const double same = p + 0.5 * (1.0 - p);
  const double diff = 0.5 * (1.0 - p);
  return std::ldexp(std::pow(same, n - d) * std::pow(diff, d), -n);
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre_unit(int nodes) {
  if (nodes < 1) throw DomainError("gauss_legendre_unit: need at least one node");
  std::vector<double> x(nodes);
  std::vector<double> w(nodes);
  for (int i = 0; i < nodes; ++i) {
    // Newton iteration on P_nodes from the Chebyshev-like initial guess.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (nodes + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= nodes; ++k) {
        const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = nodes * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = 0.5 * (1.0 - z);
    w[i] = 1.0 / ((1.0 - z * z) * dp * dp);  // 2/((1-z^2)P'^2), halved for [0,1]
  }
  return {x, w};
}

CovarianceLemmaResult covariance_lemma_check(const FunctionTable& f, const FunctionTable& g) {
  if (!(f.space() == g.space())) throw DomainError("covariance_lemma_check: different spaces");
  require_uniform_binary(f.space(), "covariance_lemma_check");
  const int n = f.n();
  if (n > kCovarianceLemmaMaxN) throw GuardError("covariance_lemma_check: limited to n <= 8");
  if (!f.is_pm_one() || !g.is_pm_one()) {
    throw DomainError("covariance_lemma_check: requires {-1,+1}-valued functions");
  }
  if (!is_monotone(f) || !is_monotone(g)) {
    throw DomainError("covariance_lemma_check: requires monotone functions");
  }

  const std::uint64_t size = f.size();
  std::vector<std::uint64_t> piv_f(size);
  std::vector<std::uint64_t> piv_g(size);
  for (std::uint64_t x = 0; x < size; ++x) {
    piv_f[x] = pivotal_set(f, x).bits();
    piv_g[x] = pivotal_set(g, x).bits();
  }

  // The integrand of each coordinate is a polynomial of degree <= n - 1 in p.
  const int nodes = (n + 1) / 2 + 1;
  const auto [px, pw] = gauss_legendre_unit(nodes);

  CovarianceLemmaResult out;
  out.quadrature_nodes = nodes;
  out.per_coordinate.assign(n, 0.0);
  std::vector<double> weight_by_distance(n + 1);
  for (int k = 0; k < nodes; ++k) {
    for (int d = 0; d <= n; ++d) {
      weight_by_distance[d] = noise_pair_weight(n, 0, (std::uint64_t{1} << d) - 1, px[k]);
    }
    std::vector<double> at_node(n, 0.0);
    for (std::uint64_t x = 0; x < size; ++x) {
      for (std::uint64_t y = 0; y < size; ++y) {
        std::uint64_t both = piv_f[x] & piv_g[y];
        if (!both) continue;
        const double w = weight_by_distance[std::popcount(x ^ y)];
        for (; both; both &= both - 1) at_node[std::countr_zero(both)] += w;
      }
    }
    for (int j = 0; j < n; ++j) out.per_coordinate[j] += pw[k] * at_node[j];
  }
  for (double v : out.per_coordinate) out.lhs += v;
  out.rhs = covariance(f, g);
  return out;
}

}  // namespace cluekit
