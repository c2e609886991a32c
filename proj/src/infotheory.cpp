#include "cluekit/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cluekit {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// Group index of each representative by binary search on group ranges.
struct ZGrouping {
  std::vector<double> lo;  // smallest member of each group
  std::vector<double> hi;  // largest member

  std::size_t index_of(double v) const {
    const auto it = std::lower_bound(hi.begin(), hi.end(), v);
    return static_cast<std::size_t>(it - hi.begin());
  }
};

ZGrouping group_values(const FunctionTable& f) {
  std::vector<double> sorted(f.values().begin(), f.values().end());
  std::sort(sorted.begin(), sorted.end());
  ZGrouping g;
  for (double v : sorted) {
    if (!g.hi.empty() && v - g.hi.back() <= kZGroupTol) {
      g.hi.back() = v;
    } else {
      g.lo.push_back(v);
      g.hi.push_back(v);
    }
  }
  return g;
}

double ent_of_fibers(const FiberProjection& proj) {
  double mean = 0.0;
  double s = 0.0;
  for (std::size_t k = 0; k < proj.mass.size(); ++k) {
    mean += proj.mass[k] * proj.mean[k];
    s += proj.mass[k] * xlogx(proj.mean[k]);
  }
  return std::max(0.0, s - xlogx(mean));
}

void require_nonnegative(const FunctionTable& f, const char* what) {
  const auto w = f.weights();
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] < 0.0 && w[i] > 0.0) {
      throw DomainError(std::string(what) + ": requires f >= 0");
    }
  }
}

void check_cover(int n, std::span<const SubsetMask> cover, int k) {
  if (k < 1) throw DomainError("cover multiplicity k must be >= 1");
  for (const auto& s : cover) s.check_within(n);
  for (int j = 0; j < n; ++j) {
    int count = 0;
    for (const auto& s : cover) count += s.contains(j) ? 1 : 0;
    if (count > k) {
      throw DomainError("cover has coordinate " + std::to_string(j) + " in " +
                        std::to_string(count) + " sets, more than k = " + std::to_string(k));
    }
  }
}

}  // namespace

std::vector<double> DiscreteJoint::z_marginal() const {
  std::vector<double> out(z_values.size(), 0.0);
  for (std::size_t z = 0; z < z_values.size(); ++z) {
    for (std::uint64_t u = 0; u < u_count; ++u) out[z] += p[z * u_count + u];
  }
  return out;
}

std::vector<double> DiscreteJoint::u_marginal() const {
  std::vector<double> out(u_count, 0.0);
  for (std::size_t z = 0; z < z_values.size(); ++z) {
    for (std::uint64_t u = 0; u < u_count; ++u) out[u] += p[z * u_count + u];
  }
  return out;
}

std::vector<double> z_atoms(const FunctionTable& f) { return group_values(f).lo; }

DiscreteJoint discrete_joint(const FunctionTable& f, SubsetMask U) {
  U.check_within(f.n());
  const auto groups = group_values(f);
  DiscreteJoint joint;
  joint.z_values = groups.lo;
  joint.u_count = 1;
  for (int i = 0; i < U.size(); ++i) joint.u_count *= static_cast<std::uint64_t>(f.q());
  joint.p.assign(joint.z_values.size() * joint.u_count, 0.0);
  const auto w = f.weights();
  const auto v = f.values();
  visit_subset_keys(f.space(), U, [&](std::uint64_t idx, std::uint64_t key) {
    joint.p[groups.index_of(v[idx]) * joint.u_count + key] += w[idx];
  });
  return joint;
}

double entropy(std::span<const double> p) {
  double total = 0.0;
  double h = 0.0;
  for (double x : p) {
    if (x < 0.0) throw DomainError("entropy: negative probability");
    total += x;
    h -= xlogx(x);
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("entropy: probabilities do not sum to 1");
  return std::max(0.0, h);
}

double entropy_of_values(const FunctionTable& f) {
  return entropy(discrete_joint(f, SubsetMask::empty()).z_marginal());
}

double mutual_information(const FunctionTable& f, SubsetMask U) {
  const auto joint = discrete_joint(f, U);
  const auto pz = joint.z_marginal();
  const auto pu = joint.u_marginal();
  double mi = 0.0;
  for (std::size_t z = 0; z < pz.size(); ++z) {
    for (std::uint64_t u = 0; u < joint.u_count; ++u) {
      const double pj = joint.p[z * joint.u_count + u];
      if (pj > 0.0) mi += pj * std::log(pj / (pz[z] * pu[u]));
    }
  }
  return std::max(0.0, mi);
}

IClue i_clue(const FunctionTable& f, SubsetMask U) {
  U.check_within(f.n());
  IClue r;
  r.h_z = entropy_of_values(f);
  if (!(r.h_z > 1e-14)) throw DegenerateError("i_clue: degenerate function (constant Z)");
  r.mi = mutual_information(f, U);
  r.i_clue = std::min(1.0, r.mi / r.h_z);
  r.sig_i = 1.0 - std::min(1.0, mutual_information(f, U.complement(f.n())) / r.h_z);
  return r;
}

double ent_functional(const FunctionTable& f) {
  require_nonnegative(f, "ent_functional");
  if (!(expectation(f) > 0.0)) throw DegenerateError("ent_functional: requires E f > 0");
  return ent_of_fibers(project(f, SubsetMask::full(f.n())));
}

double kl_clue(const FunctionTable& f, SubsetMask U) {
  U.check_within(f.n());
  const double denom = ent_functional(f);
  if (!(denom > 1e-14 * std::max(1.0, expectation(f)))) {
    throw DegenerateError("kl_clue: degenerate function (Ent(f) = 0)");
  }
  return std::min(1.0, ent_of_fibers(project(f, U)) / denom);
}

double shearer_deficit(const FunctionTable& f, std::span<const SubsetMask> cover, int k) {
  check_cover(f.n(), cover, k);
  double s = 0.0;
  for (const auto& set : cover) s += mutual_information(f, set);
  return k * entropy_of_values(f) - s;
}

double kl_shearer_deficit(const FunctionTable& f, std::span<const SubsetMask> cover, int k) {
  check_cover(f.n(), cover, k);
  const double mean = expectation(f);
  const double total = ent_functional(f) / mean;
  double s = 0.0;
  for (const auto& set : cover) s += ent_of_fibers(project(f, set)) / mean;
  return k * total - s;
}

}  // namespace cluekit
