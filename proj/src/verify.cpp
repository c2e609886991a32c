#include "cluekit/verify.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include "cluekit/clue.hpp"
#include "cluekit/core.hpp"
#include "cluekit/games.hpp"
#include "cluekit/infotheory.hpp"
#include "cluekit/montecarlo.hpp"
#include "cluekit/perco.hpp"
#include "cluekit/rng.hpp"
#include "cluekit/spectral.hpp"
#include "cluekit/symmetry.hpp"
#include "cluekit/zoo.hpp"

namespace cluekit {

using nlohmann::json;

namespace {

json mask_json(SubsetMask U) { return U.indices(); }

class Checker {
 public:
  explicit Checker(SuiteResult& r) : r_(r) {}
  bool check(bool ok, const std::function<json()>& instance) {
    ++r_.checks;
    if (!ok) {
      r_.passed = false;
      ++r_.failure_count;
      if (r_.failures.size() < kMaxReportedFailures) r_.failures.push_back(instance());
    }
    return ok;
  }

 private:
  SuiteResult& r_;
};

// --- random instances -------------------------------------------------------

std::vector<double> random_simplex(Rng& rng, int q) {
  std::vector<double> p(q);
  double s = 0.0;
  for (double& x : p) s += (x = 0.15 + uniform01(rng));
  for (double& x : p) x /= s;
  // Renormalize so the entries sum to 1 to within rounding.
  double t = 0.0;
  for (int i = 0; i + 1 < q; ++i) t += p[i];
  p[q - 1] = 1.0 - t;
  return p;
}

ProductSpace random_space(Rng& rng, int n, int q) {
  std::vector<std::vector<double>> m(n);
  for (auto& v : m) v = random_simplex(rng, q);
  return ProductSpace(n, q, std::move(m));
}

FunctionTable random_real(Rng& rng, const ProductSpace& space) {
  std::vector<double> v(space.config_count());
  for (double& x : v) x = 2.0 * uniform01(rng) - 1.0;
  return FunctionTable(space, std::move(v));
}

FunctionTable random_levels(Rng& rng, const ProductSpace& space, int levels) {
  std::vector<double> v(space.config_count());
  for (double& x : v) x = static_cast<double>(rng() % static_cast<std::uint64_t>(levels));
  return FunctionTable(space, std::move(v));
}

// {0,1}-valued with min(P[f=1], P[f=0]) >= 0.05.
FunctionTable random_boolean(Rng& rng, const ProductSpace& space) {
  while (true) {
    const double r = 0.2 + 0.6 * uniform01(rng);
    std::vector<double> v(space.config_count());
    for (double& x : v) x = uniform01(rng) < r ? 1.0 : 0.0;
    FunctionTable f(space, std::move(v));
    if (p_min(f) >= 0.05) return f;
  }
}

// Non-constant monotone {-1,+1} function: a positive threshold function or a
// positive DNF.
FunctionTable random_monotone(Rng& rng, int n, bool threshold) {
  const auto space = ProductSpace::uniform(n);
  while (true) {
    FunctionTable f = [&] {
      if (threshold) {
        std::vector<double> w(n);
        double total = 0.0;
        for (double& x : w) total += (x = 0.1 + uniform01(rng));
        const double t = (2.0 * uniform01(rng) - 1.0) * 0.8 * total;
        return FunctionTable::generate(space, [&](std::span<const int> d) {
          double s = 0.0;
          for (int i = 0; i < n; ++i) s += d[i] ? w[i] : -w[i];
          return s > t ? 1.0 : -1.0;
        });
      }
      const int terms = 1 + static_cast<int>(rng() % 4);
      std::vector<std::uint64_t> mins(terms);
      for (auto& mterm : mins) {
        do {
          mterm = rng() & ((std::uint64_t{1} << n) - 1);
        } while (mterm == 0);
      }
      std::vector<double> v(std::size_t{1} << n);
      for (std::uint64_t x = 0; x < v.size(); ++x) {
        bool on = false;
        for (auto mterm : mins) on = on || (x & mterm) == mterm;
        v[x] = on ? 1.0 : -1.0;
      }
      return FunctionTable(space, std::move(v));
    }();
    if (variance(f) > 0.0) return f;
  }
}

SubsetMask random_mask(Rng& rng, int n, bool nonempty) {
  const std::uint64_t full = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  while (true) {
    const std::uint64_t m = rng() & full;
    if (!nonempty || m != 0) return SubsetMask{m};
  }
}

// Zoo functions carrying a transitive tagged action.
std::vector<ZooFunction> transitive_zoo(int max_n) {
  std::vector<ZooFunction> all = {sum(6),      parity(6),     majority(5),          majority(7),
                                  tribes(2, 3), tribes(3, 2), asym_majority(6, 0.5)};
  if (max_n >= 10) {
    all = {sum(10),       parity(10),    majority(9),           tribes(2, 5),
           tribes(3, 3),  majority(7),   asym_majority(10, 0.3)};
  }
  return all;
}

// Nonnegative version for the entropy functional.
FunctionTable nonnegative_version(const FunctionTable& f) {
  if (f.is_pm_one()) return f.affine(0.5, 0.5);
  double lo = 0.0;
  for (double v : f.values()) lo = std::min(lo, v);
  return f.affine(1.0, -lo);
}

// --- suites -----------------------------------------------------------------

void suite_transitive_bound(SuiteResult& r, std::uint64_t) {
  Checker c(r);
  const std::vector<ZooFunction> fns = {sum(12), parity(10), majority(11), tribes(2, 4),
                                        tribes(3, 4)};
  json per = json::object();
  for (const auto& z : fns) {
    const auto f = z.table();
    const auto group = z.group();
    c.check(group.is_transitive(), [&] { return json{{"function", z.name}, {"error", "not transitive"}}; });
    c.check(is_invariant(f, group), [&] { return json{{"function", z.name}, {"error", "not invariant"}}; });
    const auto vals = clue_all_subsets(f);
    double max_excess = -1.0;
    double max_gap = 0.0;
    const bool is_sum = z.name.rfind("sum:", 0) == 0;
    for (std::uint64_t u = 0; u < vals.size(); ++u) {
      const double bound = static_cast<double>(std::popcount(u)) / z.n;
      const double excess = vals[u] - bound;
      max_excess = std::max(max_excess, excess);
      c.check(excess <= 1e-10, [&] {
        return json{{"function", z.name}, {"U", mask_json(SubsetMask{u})}, {"clue", vals[u]}, {"bound", bound}};
      });
      if (is_sum) {
        max_gap = std::max(max_gap, std::abs(excess));
        c.check(std::abs(excess) <= 1e-10, [&] {
          return json{{"function", z.name}, {"U", mask_json(SubsetMask{u})}, {"clue", vals[u]},
                      {"error", "sum is not sharp"}};
        });
      }
    }
    per[z.name] = {{"n", z.n}, {"subsets", vals.size()}, {"max_excess", max_excess}};
    if (is_sum) per[z.name]["max_sharpness_gap"] = max_gap;
  }
  r.details["functions"] = per;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void suite_spectral_identity(SuiteResult& r, std::uint64_t seed) {
  Checker c(r);
  Rng rng = make_rng(seed, 2);
  double worst_walsh = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n = 2 + i % 7;
    const auto f = random_real(rng, ProductSpace::uniform(n));
    const auto direct = clue_all_subsets(f);
    const auto spec = clue_all_subsets(spectral_distribution(walsh_hadamard(f), true));
    const double d = max_diff(direct, spec);
    worst_walsh = std::max(worst_walsh, d);
    c.check(d <= 1e-10, [&] { return json{{"route", "walsh"}, {"n", n}, {"index", i}, {"max_diff", d}}; });
  }
  double worst_es = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int n = 2 + i % 5;
    const int q = i % 2 == 0 ? 2 : 3;
    const auto f = random_real(rng, random_space(rng, n, q));
    const auto direct = clue_all_subsets(f);
    const auto spec = clue_all_subsets(spectral_distribution(efron_stein(f), true));
    const double d = max_diff(direct, spec);
    worst_es = std::max(worst_es, d);
    c.check(d <= 1e-10, [&] {
      return json{{"route", "efron-stein"}, {"n", n}, {"q", q}, {"index", i}, {"max_diff", d}};
    });
  }
  r.details["walsh_functions"] = 100;
  r.details["walsh_max_diff"] = worst_walsh;
  r.details["efron_stein_functions"] = 20;
  r.details["efron_stein_max_diff"] = worst_es;
}

double inner(const FunctionTable& a, const FunctionTable& b) {
  const auto w = a.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += w[i] * a[i] * b[i];
  return s;
}

void suite_efron_stein(SuiteResult& r, std::uint64_t seed) {
  Checker c(r);
  Rng rng = make_rng(seed, 3);
  double worst_sum = 0.0;
  double worst_orth = 0.0;
  double worst_walsh = 0.0;
  double min_norm = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 24; ++i) {
    const int n = 2 + i % 5;
    const int kind = i % 3;  // uniform binary, biased binary, ternary
    const auto space = kind == 0 ? ProductSpace::uniform(n) : random_space(rng, n, kind == 1 ? 2 : 3);
    const auto f = random_real(rng, space);
    const auto es = efron_stein(f, true);
    auto inst = [&](const char* what, double v) {
      return json{{"index", i}, {"n", n}, {"q", space.q()}, {"check", what}, {"value", v}};
    };
    double total = 0.0;
    for (double x : es.norms) {
      min_norm = std::min(min_norm, x);
      c.check(x >= -1e-12, [&] { return inst("nonnegative", x); });
      total += x;
    }
    const double sum_err = std::abs(total - second_moment(f));
    worst_sum = std::max(worst_sum, sum_err);
    c.check(sum_err <= 1e-9, [&] { return inst("sum to E f^2", sum_err); });
    const auto& comps = *es.components;
    std::vector<double> recon(f.size(), 0.0);
    for (std::size_t s = 0; s < comps.size(); ++s) {
      for (std::size_t x = 0; x < f.size(); ++x) recon[x] += comps[s][x];
      const double self = std::abs(inner(comps[s], comps[s]) - es.norms[s]);
      c.check(self <= 1e-9, [&] { return inst("component norm", self); });
      for (std::size_t t = s + 1; t < comps.size(); ++t) {
        const double ip = std::abs(inner(comps[s], comps[t]));
        worst_orth = std::max(worst_orth, ip);
        c.check(ip <= 1e-9, [&] { return inst("orthogonality", ip); });
      }
    }
    double recon_err = 0.0;
    for (std::size_t x = 0; x < f.size(); ++x) recon_err = std::max(recon_err, std::abs(recon[x] - f[x]));
    c.check(recon_err <= 1e-9, [&] { return inst("components sum to f", recon_err); });
    if (kind == 0) {
      const auto fw = walsh_hadamard(f);
      for (std::size_t s = 0; s < es.norms.size(); ++s) {
        const double d = std::abs(es.norms[s] - fw.coeffs[s] * fw.coeffs[s]);
        worst_walsh = std::max(worst_walsh, d);
        c.check(d <= 1e-10, [&] { return inst("equals squared Walsh coefficient", d); });
      }
    }
  }
  r.details["functions"] = 24;
  r.details["min_norm"] = min_norm;
  r.details["max_sum_error"] = worst_sum;
  r.details["max_orthogonality_error"] = worst_orth;
  r.details["max_walsh_error"] = worst_walsh;
}

void suite_games(SuiteResult& r, std::uint64_t seed) {
  Checker c(r);
  Rng rng = make_rng(seed, 4);
  double worst_marginal = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int n = 2 + i % 7;
    const auto f = random_real(rng, ProductSpace::uniform(n));
    const auto v = build_clue_game(f);
    const auto phi = shapley(v);
    const double var = variance(f);
    const auto marg = spectral_marginals(spectral_distribution(walsh_hadamard(f), true));
    double eff = -v(SubsetMask::full(n));
    for (int j = 0; j < n; ++j) {
      eff += phi[j];
      const double d = std::abs(phi[j] / var - marg[j]);
      worst_marginal = std::max(worst_marginal, d);
      c.check(d <= 1e-9, [&] { return json{{"check", "shapley = marginal"}, {"index", i}, {"j", j}, {"diff", d}}; });
    }
    c.check(std::abs(eff) <= 1e-10, [&] { return json{{"check", "efficiency"}, {"index", i}, {"error", eff}}; });
  }
  r.details["shapley_marginal_max_diff"] = worst_marginal;

  int supermod_games = 0;
  for (int i = 0; i < 20; ++i) {
    const int n = 2 + i % 5;
    for (int k = 0; k < 5; ++k) {
      const int q = k == 4 ? 3 : 2;
      const auto f = random_levels(rng, random_space(rng, n, q), 3);
      if (variance(f) <= 0.0) continue;
      for (bool info : {false, true}) {
        const auto v = info ? build_iclue_game(f) : build_clue_game(f);
        const auto sm = is_supermodular(v, 1e-10);
        ++supermod_games;
        c.check(sm.supermodular, [&] {
          return json{{"check", info ? "v^I supermodular" : "v_f supermodular"}, {"function", i},
                      {"measure", k}, {"S", mask_json(sm.witness->first)},
                      {"T", mask_json(sm.witness->second)}};
        });
      }
    }
  }
  r.details["supermodularity_games"] = supermod_games;

  json zoo = json::object();
  for (const auto& z : transitive_zoo(6)) {
    const auto f = z.table();
    const auto group = z.group();
    for (bool info : {false, true}) {
      const auto v = info ? build_iclue_game(f) : build_clue_game(f);
      const std::string key = z.name + (info ? " (I)" : "");
      const bool core = shapley_in_core(v);
      c.check(core, [&] { return json{{"check", "shapley in core"}, {"game", key}}; });
      try {
        const auto b = transitive_game_bound(v, group);
        c.check(b.holds, [&] {
          return json{{"check", "transitive bound"}, {"game", key}, {"max_excess", b.max_excess}};
        });
        zoo[key] = {{"in_core", core}, {"bound_holds", b.holds}, {"max_excess", b.max_excess}};
      } catch (const DomainError& e) {
        c.check(false, [&] { return json{{"check", "transitive bound"}, {"game", key}, {"error", e.what()}}; });
      }
      // Subgame monotonicity along random chains S subset T.
      for (int t = 0; t < 10; ++t) {
        const auto T = random_mask(rng, z.n, true);
        const auto S = SubsetMask{T.bits() & rng()};
        const bool ok = subgame_shapley_monotone(v, S, T);
        c.check(ok, [&] {
          return json{{"check", "subgame monotone"}, {"game", key}, {"S", mask_json(S)}, {"T", mask_json(T)}};
        });
      }
    }
    if (z.name.rfind("sum:", 0) == 0) {
      const auto v = build_clue_game(f);
      double gap = 0.0;
      for (std::uint64_t s = 0; s < v.values().size(); ++s) {
        gap = std::max(gap, std::abs(v.values()[s] / v.values().back() -
                                     static_cast<double>(std::popcount(s)) / z.n));
      }
      c.check(gap <= 1e-10, [&] { return json{{"check", "sum game tight"}, {"gap", gap}}; });
    }
  }
  const auto dict = build_clue_game(dictator(5, 0).table());
  c.check(shapley_in_core(dict), [] { return json{{"check", "shapley in core"}, {"game", "dictator:5,0"}}; });
  r.details["zoo_games"] = zoo;
}

void suite_shearer(SuiteResult& r, std::uint64_t seed) {
  Checker c(r);
  Rng rng = make_rng(seed, 5);
  json per = json::object();
  for (const auto& z : transitive_zoo(10)) {
    const auto f = z.table();
    const auto g = nonnegative_version(f);
    const double h = entropy_of_values(f);
    const double ent = ent_functional(g);
    double max_i = -1.0;
    double max_kl = -1.0;
    const std::uint64_t count = std::uint64_t{1} << z.n;
    for (std::uint64_t u = 0; u < count; ++u) {
      const SubsetMask U{u};
      const double bound = static_cast<double>(U.size()) / z.n;
      const double ic = mutual_information(f, U) / h;
      const double kc = ent_functional(conditional_expectation(g, U)) / ent;
      max_i = std::max(max_i, ic - bound);
      max_kl = std::max(max_kl, kc - bound);
      c.check(ic <= bound + 1e-10, [&] {
        return json{{"check", "i_clue bound"}, {"function", z.name}, {"U", mask_json(U)}, {"i_clue", ic}};
      });
      c.check(kc <= bound + 1e-10, [&] {
        return json{{"check", "kl_clue bound"}, {"function", z.name}, {"U", mask_json(U)}, {"kl_clue", kc}};
      });
    }
    per[z.name] = {{"max_i_excess", max_i}, {"max_kl_excess", max_kl}};
  }
  r.details["functions"] = per;

  double min_deficit = std::numeric_limits<double>::infinity();
  double min_kl_deficit = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 50; ++i) {
    const int n = 2 + i % 5;
    const auto space = i % 2 == 0 ? ProductSpace::uniform(n) : random_space(rng, n, 2);
    const auto f = random_levels(rng, space, 4);
    std::vector<SubsetMask> cover(1 + rng() % (2 * n));
    for (auto& s : cover) s = random_mask(rng, n, true);
    int k = 1;
    for (int j = 0; j < n; ++j) {
      int m = 0;
      for (const auto& s : cover) m += s.contains(j) ? 1 : 0;
      k = std::max(k, m);
    }
    json covj = json::array();
    for (const auto& s : cover) covj.push_back(mask_json(s));
    if (variance(f) > 0.0) {
      const double d = shearer_deficit(f, cover, k);
      min_deficit = std::min(min_deficit, d);
      c.check(d >= -1e-10, [&] { return json{{"check", "shearer"}, {"index", i}, {"k", k}, {"cover", covj}, {"deficit", d}}; });
    }
    const auto g = random_real(rng, space).affine(0.5, 0.5);
    const double dk = kl_shearer_deficit(g, cover, k);
    min_kl_deficit = std::min(min_kl_deficit, dk);
    c.check(dk >= -1e-10, [&] { return json{{"check", "kl shearer"}, {"index", i}, {"k", k}, {"cover", covj}, {"deficit", dk}}; });
  }
  r.details["covers"] = 50;
  r.details["min_shearer_deficit"] = min_deficit;
  r.details["min_kl_shearer_deficit"] = min_kl_deficit;
}

void suite_sandwiches(SuiteResult& r, std::uint64_t seed) {
  Checker c(r);
  Rng rng = make_rng(seed, 6);
  struct Side {
    const char* name = "";
    std::uint64_t violations = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    json first_violation;
  };
  Side sides[4];
  sides[0].name = "tv_lower: p_min/2 clue <= tv";
  sides[1].name = "tv_upper: tv <= 2/p_min clue";
  sides[2].name = "i_lower: E^2 (1-E)^2 i_clue <= clue";
  sides[3].name = "i_upper: clue <= i_clue / p_min";
  for (int i = 0; i < 100; ++i) {
    const int n = 2 + i % 7;
    const auto space = i % 2 == 0 ? ProductSpace::uniform(n) : random_space(rng, n, 2);
    const auto f = random_boolean(rng, space);
    const double pm = p_min(f);
    const double e = expectation(f);
    const double h = entropy_of_values(f);
    for (std::uint64_t u = 1; u < (std::uint64_t{1} << n); ++u) {
      const SubsetMask U{u};
      const double cl = clue(f, U);
      const double tv = tv_clue(f, U);
      const double ic = mutual_information(f, U) / h;
      const double lhs[4] = {pm / 2.0 * cl, tv, e * e * (1 - e) * (1 - e) * ic, cl};
      const double rhs[4] = {tv, 2.0 / pm * cl, cl, ic / pm};
      for (int s = 0; s < 4; ++s) {
        const double margin = rhs[s] - lhs[s];
        sides[s].min_margin = std::min(sides[s].min_margin, margin);
        const bool ok = margin >= -1e-10;
        auto inst = [&] {
          return json{{"side", sides[s].name}, {"index", i}, {"n", n}, {"U", mask_json(U)},
                      {"values", std::vector<double>(f.values().begin(), f.values().end())}, {"p_min", pm}, {"clue", cl},
                      {"tv_clue", tv}, {"i_clue", ic}, {"lhs", lhs[s]}, {"rhs", rhs[s]}};
        };
        if (!ok && sides[s].violations++ == 0) sides[s].first_violation = inst();
        c.check(ok, inst);
      }
    }
  }
  json sj = json::object();
  for (const auto& s : sides) {
    sj[s.name] = {{"violations", s.violations}, {"min_margin", s.min_margin}};
    if (s.violations) sj[s.name]["first_violation"] = s.first_violation;
  }
  r.details["functions"] = 100;
  r.details["log_base"] = "natural";
  r.details["sides"] = sj;
}

void suite_revealment(SuiteResult& r, std::uint64_t seed) {
  Checker c(r);
  Rng rng = make_rng(seed, 7);
  double worst_identity = 0.0;
  double max_excess = -1.0;
  for (int i = 0; i < 30; ++i) {
    const int n = 2 + i % 7;
    const bool uniform = i % 2 == 0;
    const auto space = uniform ? ProductSpace::uniform(n) : random_space(rng, n, 2);
    const auto f = random_real(rng, space);
    const double var = variance(f);
    const auto es_profile = stability_profile(efron_stein(f));
    std::optional<StabilityProfile> walsh_profile;
    if (uniform) walsh_profile = stability_profile(walsh_hadamard(f));
    for (int k = 1; k <= 9; ++k) {
      const double p = k / 10.0;
      const auto D = RandomSetDistribution::bernoulli(n, p);
      const double e = expected_clue(f, D);
      const double delta = revealment(D);
      max_excess = std::max(max_excess, e - delta);
      c.check(e <= delta + 1e-10, [&] {
        return json{{"check", "bernoulli revealment"}, {"index", i}, {"p", p}, {"expected_clue", e}, {"delta", delta}};
      });
      const double id = std::abs(e - stability(es_profile, p) / var);
      worst_identity = std::max(worst_identity, id);
      c.check(id <= 1e-10, [&] {
        return json{{"check", "bernoulli identity"}, {"index", i}, {"p", p}, {"diff", id}};
      });
      if (walsh_profile) {
        const double idw = std::abs(e - stability(*walsh_profile, p) / var);
        worst_identity = std::max(worst_identity, idw);
        c.check(idw <= 1e-10, [&] {
          return json{{"check", "bernoulli identity (walsh)"}, {"index", i}, {"p", p}, {"diff", idw}};
        });
      }
    }
    const auto perms = GroupAction::dihedral(n).elements();
    for (int t = 0; t < 5; ++t) {
      const auto U = random_mask(rng, n, true);
      const auto D = RandomSetDistribution::translates(n, U, perms);
      const double e = expected_clue(f, D);
      const double delta = revealment(D);
      max_excess = std::max(max_excess, e - delta);
      c.check(e <= delta + 1e-10, [&] {
        return json{{"check", "translate revealment"}, {"index", i}, {"U", mask_json(U)},
                    {"expected_clue", e}, {"delta", delta}};
      });
    }
  }
  r.details["functions"] = 30;
  r.details["max_excess_over_revealment"] = max_excess;
  r.details["max_identity_error"] = worst_identity;
}

void suite_covariance_lemma(SuiteResult& r, std::uint64_t seed) {
  Checker c(r);
  Rng rng = make_rng(seed, 8);
  const auto d = dictator(3, 0).table();
  const auto oracle = covariance_lemma_check(d, d);
  c.check(std::abs(oracle.lhs - 1.0) <= 1e-9 && std::abs(oracle.rhs - 1.0) <= 1e-9, [&] {
    return json{{"check", "dictator oracle"}, {"lhs", oracle.lhs}, {"rhs", oracle.rhs}};
  });
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int n = 2 + i % 5;
    const auto f = random_monotone(rng, n, i % 2 == 0);
    const auto g = random_monotone(rng, n, i % 3 == 0);
    const auto res = covariance_lemma_check(f, g);
    const double diff = std::abs(res.lhs - res.rhs);
    worst = std::max(worst, diff);
    c.check(diff <= 1e-9, [&] {
      return json{{"check", "lhs = rhs"}, {"index", i}, {"n", n}, {"lhs", res.lhs}, {"rhs", res.rhs}};
    });
  }
  r.details["pairs"] = 50;
  r.details["max_abs_diff"] = worst;
  r.details["dictator_lhs"] = oracle.lhs;
  r.details["dictator_rhs"] = oracle.rhs;
  r.details["constant"] = "lhs = Cov(f, g); a factor 1/4 on the right would give 0.25 for the dictator";
}

void suite_perco(SuiteResult& r, std::uint64_t seed) {
  Checker c(r);
  Rng rng = make_rng(seed, 9);
  const RectangleSpec r32(3, 2);
  const auto exact = crossing_probability_exact(r32);
  c.check(exact.crossing * 2 == exact.total, [&] {
    return json{{"check", "self-dual 3x2 probability 1/2"}, {"crossing", exact.crossing}, {"total", exact.total}};
  });
  r.details["rect_3x2"] = {{"crossing", exact.crossing}, {"total", exact.total}};

  for (const auto& R : {RectangleSpec(3, 2), RectangleSpec(4, 3)}) {
    const int e = R.edge_count();
    std::vector<std::uint8_t> open(e);
    std::uint64_t bad = 0;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << e); ++x) {
      for (int i = 0; i < e; ++i) open[i] = (x >> i) & 1u;
      const bool ok = lr_crossing(open, R) != dual_crossing(open, R);
      if (!ok) ++bad;
      c.check(ok, [&] { return json{{"check", "duality xor"}, {"w", R.w}, {"h", R.h}, {"config", x}}; });
    }
    r.details["xor_" + std::to_string(R.w) + "x" + std::to_string(R.h)] = {
        {"configs", std::uint64_t{1} << e}, {"violations", bad}};
  }

  const TorusSpec T(3);
  const auto avg = averaged_crossing_table(T);
  c.check(is_invariant(avg, GroupAction::torus_translations(3)),
          [] { return json{{"check", "M[LR] translation invariant"}}; });
  double max_ratio_excess = -1.0;
  std::uint64_t subsets = 0;
  auto test = [&](SubsetMask U) {
    const auto b = averaged_crossing_clue_bound(avg, T, U);
    ++subsets;
    max_ratio_excess = std::max(max_ratio_excess, b.clue - b.bound);
    c.check(b.holds, [&] {
      return json{{"check", "two-orbit bound"}, {"U", mask_json(U)}, {"clue", b.clue}, {"bound", b.bound}};
    });
  };
  test(SubsetMask::empty());
  for (int a = 0; a < 18; ++a) {
    test(SubsetMask::singleton(a));
    for (int b = a + 1; b < 18; ++b) test(SubsetMask::singleton(a) | SubsetMask::singleton(b));
  }
  for (int i = 0; i < 500; ++i) {
    SubsetMask U;
    do {
      U = random_mask(rng, 18, true);
    } while (U.size() <= 2);
    test(U);
  }
  const auto orbit = subset_orbit_union(SubsetMask::singleton(0), torus_translation_group(T));
  r.details["torus3"] = {{"subsets", subsets},
                         {"max_clue_minus_bound", max_ratio_excess},
                         {"orbit_of_edge_0_clue", clue(avg, orbit)},
                         {"single_edge_clue", clue(avg, SubsetMask::singleton(0))}};

  const RectangleSpec r43(4, 3);
  const auto ex43 = crossing_probability_exact(r43);
  const auto mc = mc_crossing_probability(r43, 200000, derive_seed(seed, 10));
  const double z = std::abs(mc.estimate - ex43.probability()) /
                   std::sqrt(ex43.probability() * (1 - ex43.probability()) / mc.samples);
  c.check(z <= 3.0, [&] {
    return json{{"check", "mc crossing 4x3"}, {"exact", ex43.probability()}, {"estimate", mc.estimate}, {"z", z}};
  });
  r.details["rect_4x3"] = {{"exact", ex43.probability()}, {"edges", r43.edge_count()},
                           {"mc_estimate", mc.estimate}, {"mc_ci", {mc.ci_low, mc.ci_high}},
                           {"z", z}, {"samples", mc.samples}};
}

struct Calibration {
  double mean = 0.0;
  double se_mean = 0.0;
  double coverage = 0.0;
};

Calibration calibrate(const std::vector<McEstimate>& reps, double exact) {
  Calibration c;
  const double N = static_cast<double>(reps.size());
  for (const auto& e : reps) c.mean += e.estimate / N;
  double ss = 0.0;
  for (const auto& e : reps) {
    ss += (e.estimate - c.mean) * (e.estimate - c.mean);
    if (std::abs(e.estimate - exact) <= 3.0 * e.stderr_) c.coverage += 1.0 / N;
  }
  c.se_mean = std::sqrt(ss / (N - 1) / N);
  return c;
}

void suite_montecarlo(SuiteResult& r, std::uint64_t seed) {
  Checker c(r);
  struct Case {
    ZooFunction z;
    SubsetMask U;
    std::uint64_t outer;
    std::uint64_t inner;
  };
  const std::vector<Case> cases = {{majority(3), SubsetMask::singleton(1), 2000, 50},
                                   {sum(16), SubsetMask::full(4), 4000, 20}};
  constexpr int kReps = 200;
  json cj = json::array();
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& cs = cases[k];
    const double exact = clue(cs.z.table(), cs.U);
    std::vector<McEstimate> corr;
    std::vector<McEstimate> raw;
    for (int rep = 0; rep < kReps; ++rep) {
      const std::uint64_t s = derive_seed(seed, 1000 * (k + 1) + rep);
      corr.push_back(mc_clue(cs.z.eval, cs.z.n, cs.U, cs.outer, cs.inner, s));
      raw.push_back(mc_clue_uncorrected(cs.z.eval, cs.z.n, cs.U, cs.outer, cs.inner, s));
    }
    const auto a = calibrate(corr, exact);
    const auto b = calibrate(raw, exact);
    const double z_corr = (a.mean - exact) / a.se_mean;
    const double z_raw = (b.mean - exact) / b.se_mean;
    c.check(std::abs(z_corr) <= 3.0, [&] {
      return json{{"check", "corrected mean within 3 SE"}, {"function", cs.z.name}, {"mean", a.mean}, {"exact", exact}, {"z", z_corr}};
    });
    c.check(a.coverage >= 0.97, [&] {
      return json{{"check", "3 stderr coverage"}, {"function", cs.z.name}, {"coverage", a.coverage}};
    });
    c.check(z_raw > 3.0, [&] {
      return json{{"check", "uncorrected bias detected"}, {"function", cs.z.name}, {"mean", b.mean}, {"z", z_raw}};
    });
    cj.push_back({{"function", cs.z.name}, {"U", mask_json(cs.U)}, {"exact", exact},
                  {"outer", cs.outer}, {"inner", cs.inner}, {"reps", kReps},
                  {"corrected_mean", a.mean}, {"corrected_se_mean", a.se_mean}, {"corrected_z", z_corr},
                  {"coverage_3se", a.coverage}, {"uncorrected_mean", b.mean}, {"uncorrected_z", z_raw},
                  {"predicted_bias", (1.0 - exact) / cs.inner}});
  }
  r.details["calibration"] = cj;

  // Stability and the Bernoulli identity on Maj3 at p = 1/2.
  const auto maj3 = majority(3);
  const auto st = mc_stability(maj3.eval, 3, 0.5, 200000, derive_seed(seed, 1));
  c.check(std::abs(st.estimate - 13.0 / 32.0) <= 3.0 * st.stderr_, [&] {
    return json{{"check", "mc_stability Maj3"}, {"estimate", st.estimate}, {"stderr", st.stderr_}};
  });
  const auto eb = mc_expected_clue_bernoulli(maj3.eval, 3, 0.5, 400, 400, 10, derive_seed(seed, 2));
  c.check(std::abs(eb.estimate - 13.0 / 32.0) <= 3.0 * eb.stderr_, [&] {
    return json{{"check", "mc expected clue Maj3"}, {"estimate", eb.estimate}, {"stderr", eb.stderr_}};
  });
  c.check(eb.estimate <= 0.5 + 3.0 * eb.stderr_, [&] {
    return json{{"check", "expected clue <= p"}, {"estimate", eb.estimate}, {"stderr", eb.stderr_}};
  });
  r.details["stability_maj3_half"] = {{"estimate", st.estimate}, {"stderr", st.stderr_}, {"exact", 13.0 / 32.0}};
  r.details["expected_clue_maj3_half"] = {{"estimate", eb.estimate}, {"stderr", eb.stderr_}, {"exact", 13.0 / 32.0}};

  // Bitwise determinism across worker counts.
  const auto s16 = sum(16);
  std::vector<McEstimate> runs;
  std::vector<McEstimate> stab_runs;
  for (int threads : {1, 2, 8}) {
    set_thread_count_override(threads);
    runs.push_back(mc_clue(s16.eval, 16, SubsetMask::full(4), 3000, 10, seed));
    stab_runs.push_back(mc_stability(s16.eval, 16, 0.3, 20000, seed));
  }
  set_thread_count_override(0);
  bool same = true;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    same = same && runs[i].estimate == runs[0].estimate && runs[i].stderr_ == runs[0].stderr_ &&
           stab_runs[i].estimate == stab_runs[0].estimate;
  }
  c.check(same, [&] { return json{{"check", "determinism under 1, 2, 8 threads"}}; });
  r.details["determinism"] = {{"threads", {1, 2, 8}}, {"identical", same}, {"estimate", runs[0].estimate}};
  r.details["generator"] = std::string(kGeneratorId);
  r.details["seed"] = seed;
}

void suite_surrogates(SuiteResult& r, std::uint64_t seed) {
  Checker c(r);
  json pts = json::array();
  std::vector<double> est;
  std::vector<double> se;
  for (int total : {40, 80, 160}) {
    const int t = composite_split(total);
    const int m = composite_coupling(t);
    const int l = balanced_tribe_size(t);
    const double a = find_a(m, std::pow(static_cast<double>(m), -2.0 / 3.0));
    const auto z = composite(m, t, a, l);
    const auto T = composite_tribes_indices(m, t);
    const double exact = composite_tribes_clue(m, t, a, l);
    const auto mc = mc_clue(z.eval, z.n, std::span<const int>(T), 6000, 16, derive_seed(seed, total));
    est.push_back(mc.estimate);
    se.push_back(mc.stderr_);
    c.check(std::abs(mc.estimate - exact) <= 3.0 * mc.stderr_, [&] {
      return json{{"check", "mc matches exact composite clue"}, {"n", total}, {"estimate", mc.estimate},
                  {"stderr", mc.stderr_}, {"exact", exact}};
    });
    pts.push_back({{"n", z.n}, {"target_n", total}, {"t", t}, {"m", m}, {"tribe_size", l},
                   {"tribes", t / l}, {"a", a}, {"influence", asym_majority_influence(m, a)},
                   {"exact_clue_T", exact}, {"mc_clue_T", mc.estimate}, {"mc_stderr", mc.stderr_}});
  }
  for (std::size_t i = 0; i + 1 < est.size(); ++i) {
    const double zdiff = (est[i + 1] - est[i]) / std::sqrt(se[i] * se[i] + se[i + 1] * se[i + 1]);
    c.check(zdiff > 3.0, [&] {
      return json{{"check", "increasing trend at 3 sigma"}, {"step", i}, {"z", zdiff}};
    });
    pts[i + 1]["z_increase"] = zdiff;
  }
  r.details["composite_trend"] = pts;

  // Small composite m = 4, t = 4, a = 1/2, every tribe layout.
  json small = json::array();
  for (int l : {1, 2, 4}) {
    const auto f = composite(4, 4, 0.5, l).table();
    small.push_back({{"tribe_size", l},
                     {"clue_T", clue(f, composite_tribes_part(4, 4))},
                     {"clue_M", clue(f, composite_majority_part(4, 4))}});
  }
  r.details["composite_4_4_half"] = small;
  r.details["not_reproducible"] = {"no sparse reconstruction for crossings (asymptotic)",
                                   "limits of the composite example",
                                   "arm exponents"};
  r.details["finite_size_surrogates"] = {"transitive-bound", "shearer", "perco", "composite trend"};
}

using SuiteFn = void (*)(SuiteResult&, std::uint64_t);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"transitive-bound", suite_transitive_bound},
      {"spectral-identity", suite_spectral_identity},
      {"efron-stein", suite_efron_stein},
      {"sandwiches", suite_sandwiches},
      {"games", suite_games},
      {"shearer", suite_shearer},
      {"revealment", suite_revealment},
      {"covariance-lemma", suite_covariance_lemma},
      {"perco", suite_perco},
      {"montecarlo", suite_montecarlo},
      {"surrogates", suite_surrogates},
  };
  return r;
}

}  // namespace

json SuiteResult::to_json() const {
  return {{"schema", 1},        {"suite", name},
          {"passed", passed},   {"checks", checks},
          {"failure_count", failure_count},
          {"failures", failures}, {"details", details},
          {"seconds", seconds}};
}

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry()) out.push_back(name);
  return out;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  for (const auto& [key, fn] : registry()) {
    if (key != name) continue;
    SuiteResult r;
    r.name = name;
    r.details["seed"] = seed;
    const auto start = std::chrono::steady_clock::now();
    fn(r, seed);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  }
  throw ParseError("unknown suite '" + name + "'");
}

}  // namespace cluekit
