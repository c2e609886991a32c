#include "cluekit/zoo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

namespace cluekit {

namespace {

void check_n(int n, const char* what) {
  if (n < 1 || n > kZooMaxN) {
    throw DomainError(std::string(what) + ": n must be in [1, " + std::to_string(kZooMaxN) + "]");
  }
}

int pm_sum(std::span<const std::uint8_t> bits) {
  int s = 0;
  for (auto b : bits) s += b ? 1 : -1;
  return s;
}

// Generators of the symmetric group on coords[0..], embedded in [n].
void add_symmetric(std::vector<Permutation>& gens, int n, const std::vector<int>& coords) {
  if (coords.size() < 2) return;
  Permutation swap = identity_permutation(n);
  std::swap(swap[coords[0]], swap[coords[1]]);
  gens.push_back(swap);
  if (coords.size() >= 3) {
    Permutation cyc = identity_permutation(n);
    for (std::size_t i = 0; i < coords.size(); ++i) cyc[coords[i]] = coords[(i + 1) % coords.size()];
    gens.push_back(cyc);
  }
}

// P[S = s] for S the sum of m fair +-1 coordinates.
double pm_sum_probability(int m, int s) {
  if ((s + m) % 2 != 0 || s < -m || s > m) return 0.0;
  const int k = (s + m) / 2;
  return std::exp(std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0) -
                  m * std::log(2.0));
}

// E Maj^{a}(omega) on m fair coordinates, ties (sum = theta) to -1.
double asym_majority_mean(int m, double a) {
  const double theta = a * std::sqrt(static_cast<double>(m));
  double up = 0.0;
  for (int s = -m; s <= m; s += 2) {
    if (s > theta) up += pm_sum_probability(m, s);
  }
  return 2.0 * up - 1.0;
}

bool tribes_value(std::span<const std::uint8_t> bits, int l, int k) {
  for (int t = 0; t < k; ++t) {
    bool all = true;
    for (int i = 0; i < l && all; ++i) all = bits[t * l + i] != 0;
    if (all) return true;
  }
  return false;
}

// Strict parsers for spec arguments.
int to_int(const std::string& s, const std::string& spec) {
  int v = 0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (s.empty() || r.ec != std::errc{} || r.ptr != end) {
    throw ParseError("bad integer '" + s + "' in function spec '" + spec + "'");
  }
  return v;
}

double to_double(const std::string& s, const std::string& spec) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad number '" + s + "' in function spec '" + spec + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

FunctionTable ZooFunction::table() const { return table(ProductSpace::uniform(n)); }

FunctionTable ZooFunction::table(const ProductSpace& space) const {
  if (space.n() != n || !space.is_binary()) {
    throw DomainError("zoo table: space must be binary on " + std::to_string(n) + " coordinates");
  }
  std::vector<std::uint8_t> bits(n);
  return FunctionTable::generate(space, [&](std::span<const int> digits) {
    for (int i = 0; i < n; ++i) bits[i] = static_cast<std::uint8_t>(digits[i]);
    return eval(bits);
  });
}

ZooFunction dictator(int n, int j) {
  check_n(n, "dictator");
  if (j < 0 || j >= n) throw DomainError("dictator: coordinate out of range");
  ZooFunction z;
  z.name = "dictator:" + std::to_string(n) + "," + std::to_string(j);
  z.n = n;
  z.eval = [j](std::span<const std::uint8_t> b) { return b[j] ? 1.0 : -1.0; };
  z.group = [n, j] {
    std::vector<int> others;
    for (int i = 0; i < n; ++i) {
      if (i != j) others.push_back(i);
    }
    std::vector<Permutation> gens;
    if (others.size() >= 2) {
      Permutation cyc = identity_permutation(n);
      for (std::size_t i = 0; i < others.size(); ++i) cyc[others[i]] = others[(i + 1) % others.size()];
      gens.push_back(cyc);
    }
    return GroupAction(n, gens);
  };
  return z;
}

ZooFunction parity(int n) {
  check_n(n, "parity");
  ZooFunction z;
  z.name = "parity:" + std::to_string(n);
  z.n = n;
  z.eval = [](std::span<const std::uint8_t> b) {
    int zeros = 0;
    for (auto x : b) zeros += x ? 0 : 1;
    return zeros % 2 == 0 ? 1.0 : -1.0;
  };
  z.group = [n] { return GroupAction::cyclic(n); };
  return z;
}

ZooFunction sum(int n) {
  check_n(n, "sum");
  ZooFunction z;
  z.name = "sum:" + std::to_string(n);
  z.n = n;
  z.eval = [](std::span<const std::uint8_t> b) { return static_cast<double>(pm_sum(b)); };
  z.group = [n] { return GroupAction::cyclic(n); };
  return z;
}

ZooFunction majority(int n) {
  check_n(n, "majority");
  if (n % 2 == 0) throw DomainError("majority: n must be odd");
  ZooFunction z;
  z.name = "maj:" + std::to_string(n);
  z.n = n;
  z.eval = [](std::span<const std::uint8_t> b) { return pm_sum(b) > 0 ? 1.0 : -1.0; };
  z.group = [n] { return GroupAction::cyclic(n); };
  return z;
}

ZooFunction asym_majority(int n, double a) {
  check_n(n, "asym_majority");
  const double theta = a * std::sqrt(static_cast<double>(n));
  ZooFunction z;
  z.name = "amaj:" + std::to_string(n) + "," + std::to_string(a);
  z.n = n;
  z.eval = [theta](std::span<const std::uint8_t> b) { return pm_sum(b) > theta ? 1.0 : -1.0; };
  z.group = [n] { return GroupAction::cyclic(n); };
  return z;
}

ZooFunction tribes(int l, int k) {
  if (l < 1 || k < 1) throw DomainError("tribes: l and k must be >= 1");
  check_n(l * k, "tribes");
  ZooFunction z;
  z.name = "tribes:" + std::to_string(l) + "," + std::to_string(k);
  z.n = l * k;
  z.eval = [l, k](std::span<const std::uint8_t> b) { return tribes_value(b, l, k) ? 1.0 : 0.0; };
  z.group = [l, k] { return GroupAction::tribes(l, k); };
  return z;
}

ZooFunction composite(int m, int t, double a, int l) {
  if (m < 1 || t < 1 || l < 1 || l > t) throw DomainError("composite: need m, t >= 1, 1 <= l <= t");
  check_n(m + t, "composite");
  const int k = t / l;
  const double theta = a * std::sqrt(static_cast<double>(m));
  ZooFunction z;
  z.name = "composite:" + std::to_string(m) + "," + std::to_string(t) + "," + std::to_string(a) +
           "," + std::to_string(l);
  z.n = m + t;
  z.eval = [m, l, k, theta](std::span<const std::uint8_t> b) {
    const int s = pm_sum(b.first(m));
    const bool tr = tribes_value(b.subspan(m), l, k);
    return (tr ? s > theta : s > -theta) ? 1.0 : -1.0;
  };
  z.group = [m, t, l, k] {
    const int n = m + t;
    std::vector<Permutation> gens;
    std::vector<int> mpart(m);
    std::iota(mpart.begin(), mpart.end(), 0);
    add_symmetric(gens, n, mpart);
    const auto inner = GroupAction::tribes(l, k);
    for (const auto& g : inner.generators()) {
      Permutation p = identity_permutation(n);
      for (int i = 0; i < l * k; ++i) p[m + i] = m + g[i];
      gens.push_back(p);
    }
    std::vector<int> dummies;
    for (int i = m + l * k; i < n; ++i) dummies.push_back(i);
    add_symmetric(gens, n, dummies);
    return GroupAction(n, gens);
  };
  return z;
}

ZooFunction composite(int m, int t, double a) {
  return composite(m, t, a, balanced_tribe_size(t));
}

SubsetMask composite_majority_part(int m, int t) {
  if (m < 1 || t < 1 || m + t > 64) throw DomainError("composite part mask: need m + t <= 64");
  return SubsetMask::full(m);
}

SubsetMask composite_tribes_part(int m, int t) {
  if (m < 1 || t < 1 || m + t > 64) throw DomainError("composite part mask: need m + t <= 64");
  return SubsetMask::full(m + t) ^ SubsetMask::full(m);
}

std::vector<int> composite_tribes_indices(int m, int t) {
  check_n(m + t, "composite");
  std::vector<int> out(t);
  std::iota(out.begin(), out.end(), m);
  return out;
}

int composite_coupling(int t) {
  if (t < 2) throw DomainError("composite_coupling: t must be >= 2");
  return static_cast<int>(std::lround(std::pow(t / std::log(static_cast<double>(t)), 1.5)));
}

int balanced_tribe_size(int t) {
  if (t < 1) throw DomainError("balanced_tribe_size: t must be >= 1");
  if (t < 4) return 1;
  const double lg = std::log2(static_cast<double>(t));
  return std::max(1, static_cast<int>(std::lround(lg - std::log2(lg))));
}

int composite_split(int total) {
  int best = 0;
  for (int t = 2; t < total; ++t) {
    if (t + composite_coupling(t) <= total) best = t;
  }
  if (best == 0) throw DomainError("composite_split: total too small");
  return best;
}

double asym_majority_influence(int m, double a) {
  if (m < 1) throw DomainError("asym_majority_influence: m must be >= 1");
  const double theta = a * std::sqrt(static_cast<double>(m));
  double s = 0.0;
  for (int v = -(m - 1); v <= m - 1; v += 2) {
    if (v > theta - 1.0 && v <= theta + 1.0) s += pm_sum_probability(m - 1, v);
  }
  return s;
}

double find_a(int m, double target_influence) {
  if (m < 1) throw DomainError("find_a: m must be >= 1");
  const double root = std::sqrt(static_cast<double>(m));
  if (asym_majority_influence(m, 0.0) <= target_influence) return 0.0;
  double lo = 0.0;
  double hi = root + 1.0;
  if (asym_majority_influence(m, hi) > target_influence) {
    throw DomainError("find_a: target influence below every attainable value");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    (asym_majority_influence(m, mid) > target_influence ? lo : hi) = mid;
  }
  // The plateau entered at hi keeps the same pivotal value v; theta = v lies
  // in its interior.
  const double theta = hi * root;
  int v = -(m - 1);
  while (!(v > theta - 1.0 && v <= theta + 1.0)) v += 2;
  return v / root;
}

double composite_tribes_clue(int m, int t, double a, int l) {
  const int k = t / l;
  const double tau = 1.0 - std::pow(1.0 - std::ldexp(1.0, -l), k);
  const double mu_p = asym_majority_mean(m, a);
  const double mu_m = asym_majority_mean(m, -a);
  const double mean = tau * mu_p + (1.0 - tau) * mu_m;
  const double var = 1.0 - mean * mean;
  if (!(var > 0.0)) throw DegenerateError("composite_tribes_clue: degenerate function");
  return tau * (1.0 - tau) * (mu_p - mu_m) * (mu_p - mu_m) / var;
}

ZooFunction parse_zoo(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ParseError("function spec '" + spec + "' lacks ':'");
  const std::string kind = spec.substr(0, colon);
  const auto args = split(spec.substr(colon + 1), ',');
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi) {
      throw ParseError("wrong argument count in function spec '" + spec + "'");
    }
  };
  try {
    if (kind == "dictator") {
      need(2, 2);
      return dictator(to_int(args[0], spec), to_int(args[1], spec));
    }
    if (kind == "parity") {
      need(1, 1);
      return parity(to_int(args[0], spec));
    }
    if (kind == "sum") {
      need(1, 1);
      return sum(to_int(args[0], spec));
    }
    if (kind == "maj") {
      need(1, 1);
      return majority(to_int(args[0], spec));
    }
    if (kind == "amaj") {
      need(2, 2);
      return asym_majority(to_int(args[0], spec), to_double(args[1], spec));
    }
    if (kind == "tribes") {
      need(2, 2);
      return tribes(to_int(args[0], spec), to_int(args[1], spec));
    }
    if (kind == "composite") {
      need(3, 4);
      const int m = to_int(args[0], spec);
      const int t = to_int(args[1], spec);
      const double a = to_double(args[2], spec);
      if (args.size() == 4) return composite(m, t, a, to_int(args[3], spec));
      return composite(m, t, a);
    }
  } catch (const DomainError& e) {
    throw ParseError("invalid function spec '" + spec + "': " + e.what());
  }
  throw ParseError("unknown function family '" + kind + "'");
}

std::vector<ZooEntry> zoo_catalog() {
  return {
      {"dictator:n,j", "omega_j, values +-1"},
      {"parity:n", "product of all coordinates, values +-1"},
      {"sum:n", "sum of all coordinates, integer values"},
      {"maj:n", "majority on odd n, values +-1"},
      {"amaj:n,a", "+1 iff sum > a sqrt(n), values +-1"},
      {"tribes:l,k", "OR of k ANDs of l coordinates, values 0/1"},
      {"composite:m,t,a[,l]", "Maj^{+-a} on m coordinates switched by tribes on t coordinates"},
  };
}

}  // namespace cluekit
