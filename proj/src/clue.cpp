#include "cluekit/clue.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cluekit {

namespace {

void require_boolean(const FunctionTable& f, const char* what) {
  if (!f.is_boolean()) {
    throw DomainError(std::string(what) + ": requires a Boolean ({0,1} or {-1,+1}) table");
  }
}

// P[the K-fiber of omega is non-constant], over positive-probability points.
double nonconstant_mass(const FunctionTable& f, SubsetMask K) {
  std::uint64_t keys = 1;
  for (int i = 0; i < K.size(); ++i) keys *= static_cast<std::uint64_t>(f.q());
  std::vector<double> mass(keys, 0.0);
  std::vector<double> lo(keys, std::numeric_limits<double>::infinity());
  std::vector<double> hi(keys, -std::numeric_limits<double>::infinity());
  const auto w = f.weights();
  const auto v = f.values();
  visit_subset_keys(f.space(), K, [&](std::uint64_t idx, std::uint64_t key) {
    if (w[idx] <= 0.0) return;
    mass[key] += w[idx];
    lo[key] = std::min(lo[key], v[idx]);
    hi[key] = std::max(hi[key], v[idx]);
  });
  double out = 0.0;
  for (std::uint64_t k = 0; k < keys; ++k) {
    if (mass[k] > 0.0 && lo[k] != hi[k]) out += mass[k];
  }
  return out;
}

}  // namespace

double clue(const FunctionTable& f, SubsetMask U) {
  U.check_within(f.n());
  const double var = nondegenerate_variance(f, "clue");
  return projected_variance(f, U) / var;
}

double clue_spectral(const SpectralDistribution& dist, SubsetMask U) {
  if (!dist.conditioned) throw DomainError("clue_spectral: requires a conditioned distribution");
  U.check_within(dist.n);
  // Enumerate the nonempty submasks of U.
  double s = 0.0;
  const std::uint64_t u = U.bits();
  for (std::uint64_t sub = u; sub; sub = (sub - 1) & u) s += dist.mass[sub];
  return s;
}

std::vector<double> clue_all_subsets(const SpectralDistribution& dist) {
  if (!dist.conditioned) throw DomainError("clue_all_subsets: requires a conditioned distribution");
  std::vector<double> a(dist.mass);
  a[0] = 0.0;
  subset_zeta(a);
  return a;
}

std::vector<double> clue_all_subsets(const FunctionTable& f) {
  const double var = nondegenerate_variance(f, "clue_all_subsets");
  const std::size_t count = std::size_t{1} << f.n();
  std::vector<double> out(count);
  for (std::size_t u = 0; u < count; ++u) out[u] = projected_variance(f, SubsetMask{u}) / var;
  return out;
}

double sig(const FunctionTable& f, SubsetMask U) {
  U.check_within(f.n());
  return 1.0 - clue(f, U.complement(f.n()));
}

double sig_spectral(const SpectralDistribution& dist, SubsetMask U) {
  if (!dist.conditioned) throw DomainError("sig_spectral: requires a conditioned distribution");
  U.check_within(dist.n);
  double s = 0.0;
  for (std::size_t m = 1; m < dist.mass.size(); ++m) {
    if (m & U.bits()) s += dist.mass[m];
  }
  return s;
}

double influence_set(const FunctionTable& f, SubsetMask U) {
  require_boolean(f, "influence_set");
  U.check_within(f.n());
  return nonconstant_mass(f, U.complement(f.n()));
}

double witness(const FunctionTable& f, SubsetMask U) {
  require_boolean(f, "witness");
  U.check_within(f.n());
  return 1.0 - nonconstant_mass(f, U);
}

double influence_coordinate(const FunctionTable& f, int j) {
  require_boolean(f, "influence_coordinate");
  if (!f.space().is_binary()) throw DomainError("influence_coordinate: requires a binary space");
  if (j < 0 || j >= f.n()) throw DomainError("influence_coordinate: coordinate out of range");
  const std::uint64_t bit = std::uint64_t{1} << j;
  const auto w = f.weights();
  double s = 0.0;
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    if (f[x] != f[x ^ bit]) s += w[x];
  }
  return s;
}

double tv_clue(const FunctionTable& f, SubsetMask U) {
  U.check_within(f.n());
  const double mean = expectation(f);
  const auto w = f.weights();
  double denom = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) denom += w[i] * std::abs(f[i] - mean);
  double scale = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) scale += w[i] * std::abs(f[i]);
  if (!(denom > kDegenerateRelTol * scale) || denom <= 0.0) {
    throw DegenerateError("tv_clue: degenerate function (constant)");
  }
  const auto proj = project(f, U);
  double num = 0.0;
  for (std::size_t k = 0; k < proj.mass.size(); ++k) {
    num += proj.mass[k] * std::abs(proj.mean[k] - mean);
  }
  return num / denom;
}

double p_min(const FunctionTable& f) {
  require_boolean(f, "p_min");
  double p = expectation(f);
  if (!f.is_zero_one()) p = 0.5 * (p + 1.0);
  return std::min(p, 1.0 - p);
}

double expected_clue(const FunctionTable& f, const RandomSetDistribution& dist) {
  if (dist.n() != f.n()) throw DomainError("expected_clue: distribution on a different ground set");
  const double var = nondegenerate_variance(f, "expected_clue");
  double s = 0.0;
  for (const auto& a : dist.atoms()) s += a.probability * projected_variance(f, a.set);
  return s / var;
}

ClueReport clue_report(const FunctionTable& f, SubsetMask U) {
  ClueReport r;
  r.l2_clue = clue(f, U);
  r.sig = sig(f, U);
  r.tv_clue = tv_clue(f, U);
  if (f.is_boolean()) {
    r.influence_set = influence_set(f, U);
    r.witness = witness(f, U);
    r.p_min = p_min(f);
  }
  r.null_fibers = has_null_fibers(f.space(), U);
  return r;
}

ProjectionDistortionReport projection_distortion_check(const FunctionTable& f,
                                                       const FunctionTable& g, SubsetMask U,
                                                       double tol) {
  ProjectionDistortionReport r;
  r.eps = 1.0 - correlation(f, g);
  r.clue_f = clue(f, U);
  r.clue_g = clue(g, U);
  r.c = std::min(r.clue_f, r.clue_g);

  const auto pf = conditional_expectation(f, U);
  const auto pg = conditional_expectation(g, U);
  const double vf = variance(pf);
  const double vg = variance(pg);
  if (vf > kDegenerateRelTol * second_moment(pf) && vg > kDegenerateRelTol * second_moment(pg)) {
    r.projected_corr = covariance(pf, pg) / std::sqrt(vf * vg);
  }

  if (r.c > 0.0 && r.projected_corr) {
    r.corr_bound_applicable = true;
    r.corr_bound_holds = *r.projected_corr >= 1.0 - r.eps / r.c - tol;
    if (!r.corr_bound_holds) r.violations.push_back("Corr(Pf,Pg) < 1 - eps/c");
  }
  r.clue_shift_holds =
      r.clue_g >= r.clue_f - 2.0 * r.eps - tol && r.clue_f >= r.clue_g - 2.0 * r.eps - tol;
  if (!r.clue_shift_holds) r.violations.push_back("clue moved by more than 2 eps");
  for (double base : {r.clue_f, r.clue_g}) {
    const double denom = base - 2.0 * r.eps;
    if (denom > 0.0 && r.projected_corr &&
        *r.projected_corr < 1.0 - r.eps / denom - tol) {
      r.shifted_corr_bound_holds = false;
    }
  }
  if (!r.shifted_corr_bound_holds) {
    r.violations.push_back("Corr(Pf,Pg) < 1 - eps/(clue - 2 eps)");
  }
  return r;
}

}  // namespace cluekit
