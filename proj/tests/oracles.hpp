#pragma once

// Brute-force reference implementations. They share no code with the library
// beyond the table containers: every quantity is recomputed from the
// definition by enumerating configurations.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "cluekit/core.hpp"

namespace oracle {

using cluekit::FunctionTable;
using cluekit::ProductSpace;
using cluekit::SubsetMask;

inline std::vector<int> digits_of(const ProductSpace& s, std::uint64_t idx) {
  std::vector<int> d(s.n());
  for (int i = 0; i < s.n(); ++i) {
    d[i] = static_cast<int>(idx % s.q());
    idx /= s.q();
  }
  return d;
}

inline double prob_of(const ProductSpace& s, const std::vector<int>& d) {
  double p = 1.0;
  for (int i = 0; i < s.n(); ++i) p *= s.measure(i)[d[i]];
  return p;
}

inline double mean(const FunctionTable& f) {
  double m = 0.0;
  for (std::uint64_t x = 0; x < f.size(); ++x) m += prob_of(f.space(), digits_of(f.space(), x)) * f[x];
  return m;
}

inline double var(const FunctionTable& f) {
  const double m = mean(f);
  double v = 0.0;
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    v += prob_of(f.space(), digits_of(f.space(), x)) * (f[x] - m) * (f[x] - m);
  }
  return v;
}

// U-restricted digits as a map key.
inline std::vector<int> restrict_key(const std::vector<int>& d, SubsetMask U) {
  std::vector<int> k;
  for (int i = 0; i < static_cast<int>(d.size()); ++i) {
    if (U.contains(i)) k.push_back(d[i]);
  }
  return k;
}

// Var(E[f|F_U]) by grouping configurations on their U-digits.
inline double cond_var(const FunctionTable& f, SubsetMask U) {
  std::map<std::vector<int>, std::pair<double, double>> fib;  // mass, mass * f
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    const auto d = digits_of(f.space(), x);
    const double p = prob_of(f.space(), d);
    auto& e = fib[restrict_key(d, U)];
    e.first += p;
    e.second += p * f[x];
  }
  const double m = mean(f);
  double v = 0.0;
  for (const auto& [k, e] : fib) {
    if (e.first > 0) {
      const double mu = e.second / e.first;
      v += e.first * (mu - m) * (mu - m);
    }
  }
  return v;
}

inline double clue(const FunctionTable& f, SubsetMask U) { return cond_var(f, U) / var(f); }

// E[f chi_S] with chi_S = prod_{i in S} (2 bit_i - 1).
inline std::vector<double> walsh(const FunctionTable& f) {
  const int n = f.n();
  std::vector<double> c(std::size_t{1} << n, 0.0);
  for (std::uint64_t S = 0; S < c.size(); ++S) {
    double s = 0.0;
    for (std::uint64_t x = 0; x < f.size(); ++x) {
      const int par = std::popcount(S & ~x) & 1;
      s += (par ? -1.0 : 1.0) * f[x];
    }
    c[S] = s / static_cast<double>(f.size());
  }
  return c;
}

// Orthonormal basis phi_0 = 1, phi_1..phi_{q-1} of L2(pi) by Gram-Schmidt on
// the indicator functions. basis[a][s] = phi_a(s).
inline std::vector<std::vector<double>> orthonormal_basis(const std::vector<double>& pi) {
  const int q = static_cast<int>(pi.size());
  std::vector<std::vector<double>> basis;
  auto dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (int i = 0; i < q; ++i) s += pi[i] * a[i] * b[i];
    return s;
  };
  std::vector<std::vector<double>> cand;
  cand.push_back(std::vector<double>(q, 1.0));
  for (int j = 0; j < q; ++j) {
    std::vector<double> e(q, 0.0);
    e[j] = 1.0;
    cand.push_back(e);
  }
  for (auto v : cand) {
    for (const auto& b : basis) {
      const double c = dot(v, b);
      for (int i = 0; i < q; ++i) v[i] -= c * b[i];
    }
    const double nrm = std::sqrt(dot(v, v));
    if (nrm < 1e-9) continue;
    for (double& x : v) x /= nrm;
    basis.push_back(v);
    if (static_cast<int>(basis.size()) == q) break;
  }
  return basis;
}

// ||f^{=S}||^2 as the sum of squared coefficients in the tensor product
// basis over multi-indices whose support is exactly S.
inline std::vector<double> efron_stein_norms(const FunctionTable& f) {
  const auto& s = f.space();
  const int n = s.n();
  const int q = s.q();
  std::vector<std::vector<std::vector<double>>> bases(n);
  for (int i = 0; i < n; ++i) {
    bases[i] = orthonormal_basis(std::vector<double>(s.measure(i).begin(), s.measure(i).end()));
  }
  std::vector<double> norms(std::size_t{1} << n, 0.0);
  std::uint64_t count = 1;
  for (int i = 0; i < n; ++i) count *= q;
  std::vector<std::vector<int>> dig(f.size());
  std::vector<double> prob(f.size());
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    dig[x] = digits_of(s, x);
    prob[x] = prob_of(s, dig[x]);
  }
  for (std::uint64_t a = 0; a < count; ++a) {
    const auto alpha = digits_of(s, a);
    std::uint64_t supp = 0;
    for (int i = 0; i < n; ++i) {
      if (alpha[i] != 0) supp |= std::uint64_t{1} << i;
    }
    double c = 0.0;
    for (std::uint64_t x = 0; x < f.size(); ++x) {
      double phi = 1.0;
      for (int i = 0; i < n; ++i) phi *= bases[i][alpha[i]][dig[x][i]];
      c += prob[x] * f[x] * phi;
    }
    norms[supp] += c * c;
  }
  return norms;
}

// Shapley value by averaging marginal contributions over all n! orders.
inline std::vector<double> shapley_by_orders(int n, const std::vector<double>& v) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> phi(n, 0.0);
  double orders = 0.0;
  do {
    std::uint64_t S = 0;
    for (int i : order) {
      phi[i] += v[S | (std::uint64_t{1} << i)] - v[S];
      S |= std::uint64_t{1} << i;
    }
    orders += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& p : phi) p /= orders;
  return phi;
}

// I(f(omega) : omega_U) in nats from an explicit joint table.
inline double mutual_information(const FunctionTable& f, SubsetMask U) {
  std::map<std::pair<double, std::vector<int>>, double> joint;
  std::map<double, double> pz;
  std::map<std::vector<int>, double> pu;
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    const auto d = digits_of(f.space(), x);
    const double p = prob_of(f.space(), d);
    const auto k = restrict_key(d, U);
    joint[{f[x], k}] += p;
    pz[f[x]] += p;
    pu[k] += p;
  }
  double mi = 0.0;
  for (const auto& [zk, p] : joint) {
    if (p > 0) mi += p * std::log(p / (pz[zk.first] * pu[zk.second]));
  }
  return mi;
}

inline double entropy_of(const FunctionTable& f) {
  std::map<double, double> pz;
  for (std::uint64_t x = 0; x < f.size(); ++x) pz[f[x]] += prob_of(f.space(), digits_of(f.space(), x));
  double h = 0.0;
  for (const auto& [z, p] : pz) {
    if (p > 0) h -= p * std::log(p);
  }
  return h;
}

// Ent(E[f|F_U]) for f >= 0.
inline double ent_conditional(const FunctionTable& f, SubsetMask U) {
  std::map<std::vector<int>, std::pair<double, double>> fib;
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    const auto d = digits_of(f.space(), x);
    const double p = prob_of(f.space(), d);
    auto& e = fib[restrict_key(d, U)];
    e.first += p;
    e.second += p * f[x];
  }
  const double m = mean(f);
  double s = 0.0;
  for (const auto& [k, e] : fib) {
    const double mu = e.first > 0 ? e.second / e.first : 0.0;
    if (mu > 0) s += e.first * mu * std::log(mu);
  }
  return s - m * std::log(m);
}

// Stab(p) = Cov(f(omega), f(omega^{1-p})) on the uniform cube using the
// per-bit kernel P[y_i | x_i] = p [x_i = y_i] + (1 - p) / 2.
inline double noise_covariance(const FunctionTable& f, double p) {
  const int n = f.n();
  const double N = static_cast<double>(f.size());
  const double m = mean(f);
  double s = 0.0;
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    for (std::uint64_t y = 0; y < f.size(); ++y) {
      double k = 1.0;
      for (int i = 0; i < n; ++i) {
        const bool same = ((x >> i) & 1) == ((y >> i) & 1);
        k *= (same ? p : 0.0) + (1.0 - p) / 2.0;
      }
      s += k / N * f[x] * f[y];
    }
  }
  return s - m * m;
}

// Random helpers for property tests.
inline FunctionTable random_function(const ProductSpace& s, std::mt19937_64& rng,
                                     bool boolean = false) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::bernoulli_distribution B(0.5);
  std::vector<double> v(s.config_count());
  for (double& x : v) x = boolean ? (B(rng) ? 1.0 : 0.0) : U(rng);
  return FunctionTable(s, std::move(v));
}

inline ProductSpace random_space(int n, int q, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.1, 1.0);
  std::vector<std::vector<double>> m(n, std::vector<double>(q));
  for (auto& row : m) {
    double t = 0.0;
    for (double& x : row) t += (x = U(rng));
    for (double& x : row) x /= t;
  }
  return ProductSpace(n, q, m);
}

}  // namespace oracle
