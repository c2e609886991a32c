#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cluekit/clue.hpp"
#include "cluekit/games.hpp"
#include "cluekit/infotheory.hpp"
#include "cluekit/io.hpp"
#include "cluekit/montecarlo.hpp"
#include "cluekit/rng.hpp"
#include "cluekit/spectral.hpp"
#include "cluekit/symmetry.hpp"

namespace cluekit::cli {

using nlohmann::json;

namespace {

json report(const char* command) { return json{{"schema", 1}, {"command", command}}; }

int parse_int(const std::string& s, const char* what) {
  int v = 0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (s.empty() || r.ec != std::errc{} || r.ptr != end) {
    throw ParseError(std::string("bad ") + what + " '" + s + "'");
  }
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::string mask_text(SubsetMask m) {
  std::string out;
  for (int i : m.indices()) out += (out.empty() ? "" : ",") + std::to_string(i);
  return out.empty() ? "none" : out;
}

void require_seed(const std::optional<std::uint64_t>& seed, const char* command) {
  if (!seed) throw ParseError(std::string(command) + ": --seed is required for randomized runs");
}

Evaluator evaluator_of(const LoadedFunction& f) {
  if (f.zoo) return f.zoo->eval;
  const auto& t = f.require_table();
  if (!t.space().is_uniform_binary()) {
    throw DomainError("Monte Carlo estimators need the uniform binary measure");
  }
  const FunctionTable table = t;
  return [table](std::span<const std::uint8_t> bits) {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) idx |= std::uint64_t{bits[i] != 0} << i;
    return table[idx];
  };
}

json metrics_for(const FunctionTable& f, SubsetMask U, const std::vector<std::string>& metrics) {
  json out = json::object();
  for (const auto& m : metrics) {
    if (m == "l2") {
      out["l2_clue"] = clue(f, U);
    } else if (m == "sig") {
      out["sig"] = sig(f, U);
    } else if (m == "tv") {
      out["tv_clue"] = tv_clue(f, U);
    } else if (m == "i") {
      const auto r = i_clue(f, U);
      out["i_clue"] = r.i_clue;
      out["sig_i"] = r.sig_i;
      out["mutual_information"] = r.mi;
      out["entropy_z"] = r.h_z;
    } else if (m == "kl") {
      out["kl_clue"] = kl_clue(f.is_pm_one() ? f.affine(0.5, 0.5) : f, U);
    } else if (m == "influence") {
      out["influence"] = influence_set(f, U);
    } else if (m == "witness") {
      out["witness"] = witness(f, U);
    } else {
      throw ParseError("unknown metric '" + m + "' (l2, sig, tv, i, kl, influence, witness)");
    }
  }
  return out;
}

}  // namespace

const FunctionTable& LoadedFunction::require_table() const {
  if (!table) {
    throw GuardError("function '" + name + "' on " + std::to_string(n) +
                     " coordinates exceeds the exact engine guard");
  }
  return *table;
}

LoadedFunction load_function(const std::string& spec, std::optional<double> bias, bool need_table) {
  LoadedFunction out;
  if (spec.size() > 5 && spec.ends_with(".json")) {
    if (bias) throw ParseError("--bias applies to zoo functions only");
    out.table = read_function_file(spec);
    out.name = spec;
    out.n = out.table->n();
    return out;
  }
  out.zoo = parse_zoo(spec);
  out.name = out.zoo->name;
  out.n = out.zoo->n;
  std::optional<ProductSpace> space;
  if (bias) {
    if (!(*bias > 0.0 && *bias < 1.0)) throw ParseError("--bias must be in (0, 1)");
    space = ProductSpace::iid(out.n, {1.0 - *bias, *bias});
  } else {
    space = ProductSpace::uniform(out.n);
  }
  if (space->within_guard()) {
    out.table = out.zoo->table(*space);
  } else if (need_table) {
    out.require_table();
  }
  return out;
}

std::vector<std::string> parse_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

SubsetMask parse_subset(const std::string& raw, int n) {
  const std::string text = trim(raw);
  if (text.empty() || text == "none") return SubsetMask::empty();
  if (text == "all") return SubsetMask::full(n);
  SubsetMask m;
  if (text.starts_with("0x") || text.starts_with("0X")) {
    std::uint64_t bits = 0;
    const auto* end = text.data() + text.size();
    const auto r = std::from_chars(text.data() + 2, end, bits, 16);
    if (text.size() == 2 || r.ec != std::errc{} || r.ptr != end) {
      throw ParseError("bad hex subset '" + text + "'");
    }
    m = SubsetMask{bits};
  } else {
    std::vector<int> idx;
    for (const auto& item : parse_list(text)) idx.push_back(parse_int(item, "subset index"));
    for (int i : idx) {
      if (i < 0 || i >= n) {
        throw ParseError("subset index " + std::to_string(i) + " out of range for n = " + std::to_string(n));
      }
    }
    m = SubsetMask::from_indices(idx);
  }
  try {
    m.check_within(n);
  } catch (const DomainError& e) {
    throw ParseError(std::string("subset: ") + e.what());
  }
  return m;
}

std::vector<int> parse_subset_indices(const std::string& raw, int n) {
  const std::string text = trim(raw);
  std::vector<int> out;
  if (text.empty() || text == "none") return out;
  if (text == "all") {
    out.resize(n);
    std::iota(out.begin(), out.end(), 0);
    return out;
  }
  if (text.starts_with("0x") || text.starts_with("0X")) return parse_subset(text, n).indices();
  for (const auto& item : parse_list(text)) {
    const auto dash = item.find('-', 1);
    const int lo = parse_int(dash == std::string::npos ? item : item.substr(0, dash), "subset index");
    const int hi = dash == std::string::npos ? lo : parse_int(item.substr(dash + 1), "subset index");
    if (lo < 0 || hi >= n || lo > hi) {
      throw ParseError("subset item '" + item + "' out of range for n = " + std::to_string(n));
    }
    for (int i = lo; i <= hi; ++i) out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SubsetMask parse_torus_subset(const std::string& raw, const TorusSpec& T) {
  const std::string text = trim(raw);
  if (text.find("h:") == std::string::npos && text.find("v:") == std::string::npos) {
    return parse_subset(text, T.edge_count());
  }
  std::uint64_t bits = 0;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ';');) {
    item = trim(item);
    if (item.empty()) continue;
    if (item.size() < 3 || (item[0] != 'h' && item[0] != 'v') || item[1] != ':') {
      throw ParseError("bad torus edge '" + item + "' (expected h:x,y or v:x,y)");
    }
    const auto xy = parse_list(item.substr(2));
    if (xy.size() != 2) throw ParseError("bad torus edge '" + item + "'");
    const int x = parse_int(xy[0], "edge x");
    const int y = parse_int(xy[1], "edge y");
    if (x < 0 || y < 0 || x >= T.n || y >= T.n) throw ParseError("torus edge out of range: " + item);
    const int e = item[0] == 'h' ? T.h_edge(x, y) : T.v_edge(x, y);
    bits |= std::uint64_t{1} << e;
  }
  return SubsetMask{bits};
}

json analyze(const AnalyzeArgs& a) {
  const auto f = load_function(a.fn, a.bias, true);
  const auto& t = f.require_table();
  const auto U = parse_subset(a.subset, f.n);
  json out = report("analyze");
  out["function"] = f.name;
  out["n"] = f.n;
  out["subset"] = U.indices();
  out.update(metrics_for(t, U, parse_list(a.metrics)));
  if (t.is_boolean()) out["p_min"] = p_min(t);
  out["null_fibers"] = has_null_fibers(t.space(), U);
  if (a.bernoulli) {
    const auto D = RandomSetDistribution::bernoulli(f.n, *a.bernoulli);
    out["bernoulli_p"] = *a.bernoulli;
    out["expected_clue"] = expected_clue(t, D);
    out["revealment"] = revealment(D);
  }
  return out;
}

json spectrum(const SpectrumArgs& a) {
  const auto f = load_function(a.fn, a.bias, true);
  const auto& t = f.require_table();
  const bool walsh = t.space().is_uniform_binary();
  const auto dist = walsh ? spectral_distribution(walsh_hadamard(t), true)
                          : spectral_distribution(efron_stein(t), true);
  const auto profile = walsh ? stability_profile(walsh_hadamard(t)) : stability_profile(efron_stein(t));
  json out = report("spectrum");
  out["function"] = f.name;
  out["n"] = f.n;
  out["basis"] = walsh ? "fourier-walsh" : "efron-stein";
  out["mean"] = expectation(t);
  out["variance"] = variance(t);
  out["level_weights"] = profile.level_weights;
  out["spectral_marginals"] = spectral_marginals(dist);
  std::vector<std::uint64_t> order(dist.mass.size());
  for (std::uint64_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](auto x, auto y) { return dist.mass[x] > dist.mass[y]; });
  json rows = json::array();
  for (std::size_t i = 0; i < order.size() && static_cast<int>(i) < a.top; ++i) {
    if (dist.mass[order[i]] <= 0.0) break;
    rows.push_back({{"set", mask_text(SubsetMask{order[i]})}, {"mass", dist.mass[order[i]]}});
  }
  out["rows"] = rows;
  return out;
}

json clue_sweep(const ClueArgs& a) {
  const auto f = load_function(a.fn, a.bias, true);
  const auto& t = f.require_table();
  const auto metrics = parse_list(a.metrics);
  std::vector<SubsetMask> subsets;
  if (a.all) {
    if (f.n > 20) throw GuardError("--all: n exceeds 20");
    for (std::uint64_t u = 0; u < (std::uint64_t{1} << f.n); ++u) subsets.emplace_back(u);
  }
  for (const auto& s : a.subsets) subsets.push_back(parse_subset(s, f.n));
  if (subsets.empty()) throw ParseError("clue: give --subset or --all");
  json rows = json::array();
  for (const auto& U : subsets) {
    json row = {{"subset", mask_text(U)}, {"size", U.size()}};
    row.update(metrics_for(t, U, metrics));
    rows.push_back(row);
  }
  json out = report("clue");
  out["function"] = f.name;
  out["n"] = f.n;
  out["rows"] = rows;
  return out;
}

json game(const GameArgs& a) {
  const auto f = load_function(a.fn, a.bias, true);
  const auto& t = f.require_table();
  const auto v = a.power ? build_clue_power_game(t, *a.power)
                         : (a.iclue ? build_iclue_game(t) : build_clue_game(t));
  json out = report("game");
  out["function"] = f.name;
  out["n"] = f.n;
  out["game"] = a.power ? "clue^k" : (a.iclue ? "mutual-information" : "clue");
  if (a.power) out["k"] = *a.power;
  out["v_full"] = v(SubsetMask::full(f.n));
  for (const auto& check : parse_list(a.checks)) {
    if (check == "shapley") {
      const auto phi = shapley(v);
      double total = 0.0;
      for (double x : phi) total += x;
      out["shapley"] = phi;
      out["efficiency_error"] = total - v(SubsetMask::full(f.n));
    } else if (check == "supermod") {
      const auto sm = is_supermodular(v, 1e-10);
      out["supermodular"] = sm.supermodular;
      if (sm.witness) out["supermodular_witness"] = {sm.witness->first.indices(), sm.witness->second.indices()};
    } else if (check == "core") {
      out["shapley_in_core"] = shapley_in_core(v);
    } else if (check == "bound") {
      if (!f.zoo) {
        out["bound"] = {{"applicable", false}, {"reason", "no group action for file input"}};
        continue;
      }
      try {
        const auto b = transitive_game_bound(v, f.zoo->group());
        out["bound"] = {{"applicable", true}, {"holds", b.holds}, {"max_excess", b.max_excess}};
      } catch (const DomainError& e) {
        out["bound"] = {{"applicable", false}, {"reason", e.what()}};
      }
    } else {
      throw ParseError("unknown game check '" + check + "' (shapley, supermod, core, bound)");
    }
  }
  return out;
}

json perco(const PercoArgs& a) {
  json out = report("perco");
  if (a.mc) require_seed(a.seed, "perco");
  if (!a.rect.empty()) {
    const auto x = a.rect.find('x');
    if (x == std::string::npos) throw ParseError("--rect expects WxH");
    const RectangleSpec R(parse_int(a.rect.substr(0, x), "width"), parse_int(a.rect.substr(x + 1), "height"));
    out["rect"] = {{"w", R.w}, {"h", R.h}, {"edges", R.edge_count()}, {"self_dual", R.self_dual()}};
    if (!a.exact && !a.mc) throw ParseError("perco --rect needs --exact or --mc N");
    if (a.exact) {
      const auto p = crossing_probability_exact(R);
      out["exact"] = {{"probability", p.probability()}, {"crossing", p.crossing}, {"total", p.total}};
    }
    if (a.mc) {
      const auto e = mc_crossing_probability(R, *a.mc, *a.seed);
      out["mc"] = {{"probability", e.estimate}, {"stderr", e.stderr_}, {"ci", {e.ci_low, e.ci_high}},
                   {"samples", e.samples}, {"seed", *a.seed}, {"generator", std::string(kGeneratorId)}};
    }
    return out;
  }
  if (!a.torus) throw ParseError("perco needs --rect WxH or --torus n");
  const TorusSpec T(*a.torus);
  out["torus"] = {{"n", T.n}, {"edges", T.edge_count()}};
  if (!a.displacement.empty()) {
    const auto d = parse_list(a.displacement);
    if (d.size() != 2) throw ParseError("--displacement expects dx,dy");
    if (!a.mc) throw ParseError("--displacement needs --mc N");
    const auto e = translate_disagreement(T.n, parse_int(d[0], "dx"), parse_int(d[1], "dy"), *a.mc, *a.seed);
    out["disagreement"] = {{"probability", e.estimate}, {"stderr", e.stderr_}, {"ci", {e.ci_low, e.ci_high}},
                           {"samples", e.samples}, {"seed", *a.seed}};
  }
  if (a.avg_clue) {
    const auto U = parse_torus_subset(a.subset, T);
    const double bound = 2.0 * U.size() / (T.n * T.n);
    if (T.edge_count() <= kTorusExactMaxEdges && !a.mc) {
      const auto b = averaged_crossing_clue_bound(T, U);
      out["clue"] = b.clue;
      out["bound"] = b.bound;
      out["holds"] = b.holds;
      out["method"] = "exact";
    } else {
      if (!a.mc) throw ParseError("torus beyond the exact guard: give --mc N --seed S");
      const auto lr = torus_lr(T);
      const auto group = torus_translation_group(T);
      Evaluator avg = [lr, group](std::span<const std::uint8_t> bits) {
        std::vector<std::uint8_t> moved(bits.size());
        double s = 0.0;
        for (const auto& g : group) {
          for (std::size_t e = 0; e < bits.size(); ++e) moved[e] = bits[g[e]];
          s += lr.eval(moved);
        }
        return s / static_cast<double>(group.size());
      };
      const auto e = mc_clue(avg, T.edge_count(), U, *a.mc, 8, *a.seed);
      out["clue"] = e.estimate;
      out["stderr"] = e.stderr_;
      out["bound"] = bound;
      out["holds"] = e.estimate <= bound + 3.0 * e.stderr_;
      out["method"] = "monte-carlo";
      out["seed"] = *a.seed;
    }
    out["subset"] = U.indices();
  }
  return out;
}

json mc_clue_cmd(const McClueArgs& a) {
  require_seed(a.seed, "mc-clue");
  const auto f = load_function(a.fn, std::nullopt, false);
  const auto eval = evaluator_of(f);
  json out = report("mc-clue");
  out["function"] = f.name;
  out["n"] = f.n;
  out["seed"] = *a.seed;
  out["generator"] = std::string(kGeneratorId);
  auto put = [&](const McEstimate& e) {
    out["estimate"] = e.estimate;
    out["stderr"] = e.stderr_;
    out["clamped"] = e.clamped;
  };
  if (a.stability) {
    out["estimator"] = "stability";
    out["p"] = *a.stability;
    out["pairs"] = a.outer;
    put(mc_stability(eval, f.n, *a.stability, a.outer, *a.seed));
    return out;
  }
  if (a.bernoulli) {
    out["estimator"] = "expected-clue-bernoulli";
    out["p"] = *a.bernoulli;
    out["sets"] = a.sets;
    out["outer"] = a.outer;
    out["inner"] = a.inner;
    put(mc_expected_clue_bernoulli(eval, f.n, *a.bernoulli, a.sets, a.outer, a.inner, *a.seed));
    return out;
  }
  const auto U = parse_subset_indices(a.subset, f.n);
  const std::span<const int> Us(U);
  out["estimator"] = a.uncorrected ? "nested-uncorrected" : "nested-anova";
  out["subset"] = U;
  out["outer"] = a.outer;
  out["inner"] = a.inner;
  put(a.uncorrected ? mc_clue_uncorrected(eval, f.n, Us, a.outer, a.inner, *a.seed)
                    : mc_clue(eval, f.n, Us, a.outer, a.inner, *a.seed));
  return out;
}

json zoo_list() {
  json out = report("zoo list");
  json rows = json::array();
  for (const auto& e : zoo_catalog()) rows.push_back({{"spec", e.syntax}, {"description", e.description}});
  out["rows"] = rows;
  return out;
}

std::string to_csv(const json& rep) {
  json rows = rep.contains("rows") ? rep["rows"] : json::array();
  if (rows.empty()) {
    json row = json::object();
    for (const auto& [k, v] : rep.items()) {
      if (v.is_primitive()) row[k] = v;
    }
    rows.push_back(row);
  }
  auto cell = [](const json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return q + "\"";
    }
    return s;
  };
  std::vector<std::string> keys;
  for (const auto& [k, v] : rows[0].items()) keys.push_back(k);
  std::string out;
  for (std::size_t i = 0; i < keys.size(); ++i) out += (i ? "," : "") + keys[i];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      out += (i ? "," : "") + (row.contains(keys[i]) ? cell(row[keys[i]]) : std::string());
    }
    out += "\n";
  }
  return out;
}

}  // namespace cluekit::cli
