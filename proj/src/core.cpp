#include "cluekit/core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace cluekit {

namespace {

constexpr double kMeasureTol = 1e-12;

void validate_probability_vector(std::span<const double> p, const std::string& what) {
  double total = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
      throw DomainError(what + ": probability outside [0,1]");
    }
    total += x;
  }
  if (std::abs(total - 1.0) > kMeasureTol) {
    throw DomainError(what + ": probabilities sum to " + std::to_string(total));
  }
}

}  // namespace

// --- SubsetMask -------------------------------------------------------------

SubsetMask SubsetMask::full(int n) {
  if (n < 0 || n > 64) throw DomainError("SubsetMask::full: n out of range");
  return SubsetMask{n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1};
}

SubsetMask SubsetMask::singleton(int j) {
  if (j < 0 || j >= 64) throw DomainError("SubsetMask::singleton: index out of range");
  return SubsetMask{std::uint64_t{1} << j};
}

SubsetMask SubsetMask::from_indices(std::span<const int> indices) {
  SubsetMask m;
  for (int j : indices) m = m | singleton(j);
  return m;
}

SubsetMask SubsetMask::complement(int n) const { return SubsetMask{~bits_} & full(n); }

void SubsetMask::check_within(int n) const {
  if (!is_subset_of(full(n))) {
    throw DomainError("subset mask has coordinates outside [0," + std::to_string(n) + ")");
  }
}

std::vector<int> SubsetMask::indices() const {
  std::vector<int> out;
  for (std::uint64_t b = bits_; b; b &= b - 1) out.push_back(std::countr_zero(b));
  return out;
}

// --- ProductSpace -----------------------------------------------------------

ProductSpace::ProductSpace(int n, int q, std::vector<std::vector<double>> measure)
    : n_(n), q_(q), measure_(std::move(measure)) {
  if (n < 1) throw DomainError("ProductSpace: n must be >= 1");
  if (q < 1) throw DomainError("ProductSpace: q must be >= 1");
  if (static_cast<int>(measure_.size()) != n) {
    throw DomainError("ProductSpace: expected one probability vector per coordinate");
  }
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(measure_[i].size()) != q) {
      throw DomainError("ProductSpace: coordinate " + std::to_string(i) +
                        " has wrong alphabet size");
    }
    validate_probability_vector(measure_[i], "coordinate " + std::to_string(i));
  }
}

ProductSpace ProductSpace::uniform(int n, int q) {
  if (q < 1) throw DomainError("ProductSpace: q must be >= 1");
  return ProductSpace(n, q, std::vector<std::vector<double>>(n, std::vector<double>(q, 1.0 / q)));
}

ProductSpace ProductSpace::iid(int n, std::vector<double> pi) {
  const int q = static_cast<int>(pi.size());
  return ProductSpace(n, q, std::vector<std::vector<double>>(n, std::move(pi)));
}

ProductSpace ProductSpace::bernoulli(std::span<const double> p_plus) {
  std::vector<std::vector<double>> m;
  for (double p : p_plus) m.push_back({1.0 - p, p});
  const int n = static_cast<int>(m.size());
  return ProductSpace(n, 2, std::move(m));
}

bool ProductSpace::is_uniform_binary() const {
  if (q_ != 2) return false;
  return std::all_of(measure_.begin(), measure_.end(),
                     [](const auto& p) { return p[0] == 0.5 && p[1] == 0.5; });
}

bool ProductSpace::is_iid() const {
  return std::all_of(measure_.begin(), measure_.end(),
                     [&](const auto& p) { return p == measure_.front(); });
}

bool ProductSpace::within_guard() const {
  std::uint64_t count = 1;
  for (int i = 0; i < n_; ++i) {
    count *= static_cast<std::uint64_t>(q_);
    if (count > kExactGuard) return false;
  }
  return true;
}

std::uint64_t ProductSpace::config_count() const {
  if (!within_guard()) {
    throw GuardError("exact engine guard exceeded: q^n > 2^26 (n=" + std::to_string(n_) +
                     ", q=" + std::to_string(q_) + ")");
  }
  return stride(n_);
}

std::uint64_t ProductSpace::stride(int coord) const {
  std::uint64_t s = 1;
  for (int i = 0; i < coord; ++i) s *= static_cast<std::uint64_t>(q_);
  return s;
}

std::vector<int> ProductSpace::decode(std::uint64_t index) const {
  std::vector<int> digits(n_);
  for (int i = 0; i < n_; ++i) {
    digits[i] = static_cast<int>(index % static_cast<std::uint64_t>(q_));
    index /= static_cast<std::uint64_t>(q_);
  }
  return digits;
}

std::uint64_t ProductSpace::encode(std::span<const int> digits) const {
  if (static_cast<int>(digits.size()) != n_) throw DomainError("encode: wrong digit count");
  std::uint64_t idx = 0;
  for (int i = n_ - 1; i >= 0; --i) {
    if (digits[i] < 0 || digits[i] >= q_) throw DomainError("encode: digit out of range");
    idx = idx * static_cast<std::uint64_t>(q_) + static_cast<std::uint64_t>(digits[i]);
  }
  return idx;
}

double ProductSpace::probability(std::uint64_t index) const {
  double p = 1.0;
  for (int i = 0; i < n_; ++i) {
    p *= measure_[i][index % static_cast<std::uint64_t>(q_)];
    index /= static_cast<std::uint64_t>(q_);
  }
  return p;
}

std::vector<double> ProductSpace::probability_table() const {
  const std::uint64_t count = config_count();
  // Built coordinate by coordinate from the most significant digit down.
  std::vector<double> w(count);
  w[0] = 1.0;
  std::uint64_t filled = 1;
  for (int i = n_ - 1; i >= 0; --i) {
    for (std::uint64_t j = filled; j-- > 0;) {
      const double base = w[j];
      for (int a = q_ - 1; a >= 0; --a) {
        w[j * q_ + a] = base * measure_[i][a];
      }
    }
    filled *= static_cast<std::uint64_t>(q_);
  }
  return w;
}

// --- FunctionTable ----------------------------------------------------------

FunctionTable::FunctionTable(ProductSpace space, std::vector<double> values) {
  if (values.size() != space.config_count()) {
    throw DomainError("FunctionTable: expected " + std::to_string(space.config_count()) +
                      " values, got " + std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("FunctionTable: non-finite value");
  }
  auto weights = space.probability_table();
  domain_ = std::make_shared<const Domain>(Domain{std::move(space), std::move(weights)});
  values_ = std::move(values);
}

FunctionTable::FunctionTable(std::shared_ptr<const Domain> domain, std::vector<double> values)
    : domain_(std::move(domain)), values_(std::move(values)) {}

FunctionTable FunctionTable::with_values(std::vector<double> values) const {
  if (values.size() != values_.size()) throw DomainError("with_values: size mismatch");
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("FunctionTable: non-finite value");
  }
  return FunctionTable(domain_, std::move(values));
}

FunctionTable FunctionTable::affine(double scale, double shift) const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(),
                 [&](double v) { return scale * v + shift; });
  return with_values(std::move(out));
}

bool FunctionTable::is_pm_one() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return v == 1.0 || v == -1.0; });
}

bool FunctionTable::is_zero_one() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return v == 0.0 || v == 1.0; });
}

bool FunctionTable::is_boolean() const { return is_pm_one() || is_zero_one(); }

// --- RandomSetDistribution --------------------------------------------------

RandomSetDistribution::RandomSetDistribution(int n, std::vector<Atom> atoms)
    : n_(n), atoms_(std::move(atoms)) {
  double total = 0.0;
  for (const auto& a : atoms_) {
    a.set.check_within(n_);
    if (!std::isfinite(a.probability) || a.probability < 0.0) {
      throw DomainError("RandomSetDistribution: negative atom probability");
    }
    total += a.probability;
  }
  if (std::abs(total - 1.0) > kMeasureTol) {
    throw DomainError("RandomSetDistribution: probabilities sum to " + std::to_string(total));
  }
}

RandomSetDistribution RandomSetDistribution::bernoulli(int n, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("bernoulli: p outside [0,1]");
  if (n > 26) throw GuardError("bernoulli: too many atoms (n > 26)");
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<Atom> atoms;
  atoms.reserve(count);
  for (std::uint64_t m = 0; m < count; ++m) {
    const int k = std::popcount(m);
    const double w = std::pow(p, k) * std::pow(1.0 - p, n - k);
    if (w > 0.0) atoms.push_back({SubsetMask{m}, w});
  }
  // Renormalize against pow rounding.
  double total = 0.0;
  for (const auto& a : atoms) total += a.probability;
  for (auto& a : atoms) a.probability /= total;
  return RandomSetDistribution(n, std::move(atoms));
}

RandomSetDistribution RandomSetDistribution::uniform_singletons(int n) {
  std::vector<Atom> atoms;
  for (int j = 0; j < n; ++j) atoms.push_back({SubsetMask::singleton(j), 1.0 / n});
  return RandomSetDistribution(n, std::move(atoms));
}

RandomSetDistribution RandomSetDistribution::point_mass(int n, SubsetMask set) {
  return RandomSetDistribution(n, {{set, 1.0}});
}

RandomSetDistribution RandomSetDistribution::translates(int n, SubsetMask set,
                                                        std::span<const std::vector<int>> perms) {
  if (perms.empty()) throw DomainError("translates: empty permutation list");
  std::map<std::uint64_t, double> merged;
  for (const auto& perm : perms) {
    if (static_cast<int>(perm.size()) != n) throw DomainError("translates: permutation size");
    std::uint64_t image = 0;
    for (int j : set.indices()) image |= std::uint64_t{1} << perm[j];
    merged[image] += 1.0 / static_cast<double>(perms.size());
  }
  std::vector<Atom> atoms;
  for (const auto& [bits, w] : merged) atoms.push_back({SubsetMask{bits}, w});
  return RandomSetDistribution(n, std::move(atoms));
}

// --- operations -------------------------------------------------------------

double expectation(const FunctionTable& f) {
  const auto w = f.weights();
  const auto v = f.values();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * v[i];
  return s;
}

double second_moment(const FunctionTable& f) {
  const auto w = f.weights();
  const auto v = f.values();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * v[i] * v[i];
  return s;
}

double variance(const FunctionTable& f) { return covariance(f, f); }

double covariance(const FunctionTable& f, const FunctionTable& g) {
  if (!(f.space() == g.space())) throw DomainError("covariance: tables on different spaces");
  const double ef = expectation(f);
  const double eg = expectation(g);
  const auto w = f.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * (f[i] - ef) * (g[i] - eg);
  return s;
}

double correlation(const FunctionTable& f, const FunctionTable& g) {
  const double vf = variance(f);
  const double vg = variance(g);
  if (vf <= 0.0 || vg <= 0.0) throw DegenerateError("correlation: zero variance");
  return covariance(f, g) / std::sqrt(vf * vg);
}

double nondegenerate_variance(const FunctionTable& f, const char* what) {
  const double var = variance(f);
  if (!(var > kDegenerateRelTol * second_moment(f)) || var <= 0.0) {
    throw DegenerateError(std::string(what) + ": degenerate function (zero variance)");
  }
  return var;
}

FiberProjection project(const FunctionTable& f, SubsetMask U) {
  const auto& space = f.space();
  U.check_within(space.n());
  std::uint64_t keys = 1;
  for (int i = 0; i < U.size(); ++i) keys *= static_cast<std::uint64_t>(space.q());
  FiberProjection out{std::vector<double>(keys, 0.0), std::vector<double>(keys, 0.0)};
  const auto w = f.weights();
  const auto v = f.values();
  visit_subset_keys(space, U, [&](std::uint64_t idx, std::uint64_t key) {
    out.mass[key] += w[idx];
    out.mean[key] += w[idx] * v[idx];
  });
  for (std::uint64_t k = 0; k < keys; ++k) {
    out.mean[k] = out.mass[k] > 0.0 ? out.mean[k] / out.mass[k] : 0.0;
  }
  return out;
}

double projected_variance(const FunctionTable& f, SubsetMask U) {
  const auto proj = project(f, U);
  double mean = 0.0;
  for (std::size_t k = 0; k < proj.mass.size(); ++k) mean += proj.mass[k] * proj.mean[k];
  double var = 0.0;
  for (std::size_t k = 0; k < proj.mass.size(); ++k) {
    const double d = proj.mean[k] - mean;
    var += proj.mass[k] * d * d;
  }
  return var;
}

FunctionTable conditional_expectation(const FunctionTable& f, SubsetMask U) {
  const auto proj = project(f, U);
  std::vector<double> out(f.size());
  visit_subset_keys(f.space(), U,
                    [&](std::uint64_t idx, std::uint64_t key) { out[idx] = proj.mean[key]; });
  return f.with_values(std::move(out));
}

bool has_null_fibers(const ProductSpace& space, SubsetMask U) {
  U.check_within(space.n());
  for (int i : U.indices()) {
    for (double p : space.measure(i)) {
      if (p == 0.0) return true;
    }
  }
  return false;
}

double revealment(const RandomSetDistribution& dist) {
  double best = 0.0;
  for (int j = 0; j < dist.n(); ++j) {
    double pj = 0.0;
    for (const auto& a : dist.atoms()) {
      if (a.set.contains(j)) pj += a.probability;
    }
    best = std::max(best, pj);
  }
  return best;
}

}  // namespace cluekit
