#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cluekit/error.hpp"
#include "cluekit/verify.hpp"
#include "commands.hpp"

namespace {

using nlohmann::json;
namespace cli = cluekit::cli;

constexpr int kExitFailed = 1;
constexpr int kExitParse = 2;
constexpr int kExitGuard = 3;
constexpr int kExitDegenerate = 4;

int fail(int code, const char* kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
  return code;
}

void emit(const json& report, bool csv) {
  if (csv) {
    std::cout << cli::to_csv(report);
  } else {
    std::cout << report.dump(2) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cluekit: clue, spectra and reconstruction bounds for functions on product spaces"};
  app.require_subcommand(1);
  bool csv = false;
  app.add_flag("--csv", csv, "Emit CSV instead of JSON")->trigger_on_parse();

  cli::AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Clue metrics of one subset");
  analyze->add_option("--fn", an.fn, "Zoo spec or JSON function file")->required();
  analyze->add_option("--subset", an.subset, "Indices, 0x mask, none or all")->required();
  analyze->add_option("--metrics", an.metrics, "l2,sig,tv,i,kl,influence,witness");
  analyze->add_option("--bias", an.bias, "Zoo functions: P[+1] per coordinate");
  analyze->add_option("--bernoulli", an.bernoulli, "Also report E[clue] over a Bernoulli(p) set");

  cli::SpectrumArgs sp;
  auto* spectrum = app.add_subcommand("spectrum", "Spectral sample distribution");
  spectrum->add_option("--fn", sp.fn, "Zoo spec or JSON function file")->required();
  spectrum->add_option("--bias", sp.bias, "Zoo functions: P[+1] per coordinate");
  spectrum->add_option("--top", sp.top, "Number of heaviest sets to list");

  cli::ClueArgs cl;
  auto* clue = app.add_subcommand("clue", "Clue sweep over subsets");
  clue->add_option("--fn", cl.fn, "Zoo spec or JSON function file")->required();
  clue->add_option("--subset", cl.subsets, "Subset (repeatable)");
  clue->add_flag("--all", cl.all, "All 2^n subsets");
  clue->add_option("--metrics", cl.metrics, "l2,sig,tv,i,kl,influence,witness");
  clue->add_option("--bias", cl.bias, "Zoo functions: P[+1] per coordinate");

  cli::GameArgs gm;
  auto* game = app.add_subcommand("game", "Cooperative game of a function");
  game->add_option("--fn", gm.fn, "Zoo spec or JSON function file")->required();
  game->add_flag("--iclue", gm.iclue, "Mutual-information game");
  game->add_option("--power", gm.power, "Game clue(f|S)^k");
  game->add_option("--checks", gm.checks, "shapley,supermod,core,bound");
  game->add_option("--bias", gm.bias, "Zoo functions: P[+1] per coordinate");

  cli::PercoArgs pc;
  auto* perco = app.add_subcommand("perco", "Bond percolation crossings");
  perco->add_option("--rect", pc.rect, "Rectangle WxH in vertices");
  perco->add_option("--torus", pc.torus, "Torus side n");
  perco->add_flag("--exact", pc.exact, "Exhaustive crossing probability");
  perco->add_option("--mc", pc.mc, "Monte Carlo samples");
  perco->add_option("--seed", pc.seed, "Master seed");
  perco->add_flag("--avg-clue", pc.avg_clue, "clue of the translation-averaged crossing");
  perco->add_option("--subset", pc.subset, "Torus edges h:x,y;v:x,y or indices");
  perco->add_option("--displacement", pc.displacement, "Translate disagreement dx,dy");

  cli::McClueArgs mc;
  auto* mcclue = app.add_subcommand("mc-clue", "Monte Carlo clue estimate");
  mcclue->add_option("--fn", mc.fn, "Zoo spec or JSON function file")->required();
  mcclue->add_option("--subset", mc.subset, "Indices with lo-hi ranges, 0x mask, none or all");
  mcclue->add_option("--outer", mc.outer, "Outer samples (pairs for --stability)");
  mcclue->add_option("--inner", mc.inner, "Inner completions per outer sample");
  mcclue->add_option("--seed", mc.seed, "Master seed");
  mcclue->add_flag("--uncorrected", mc.uncorrected, "Skip the within-fiber correction");
  mcclue->add_option("--stability", mc.stability, "Estimate Stab(p)/Var instead");
  mcclue->add_option("--bernoulli", mc.bernoulli, "Estimate E[clue] over Bernoulli(p) sets instead");
  mcclue->add_option("--sets", mc.sets, "Random sets for --bernoulli");

  auto* zoo = app.add_subcommand("zoo", "Function families");
  auto* zoo_list = zoo->add_subcommand("list", "List zoo specs");
  zoo->require_subcommand(1);

  std::string suite;
  std::uint64_t seed = cluekit::kDefaultSuiteSeed;
  auto* verify = app.add_subcommand("verify", "Run an invariant suite ('all' runs every suite)");
  verify->add_option("suite", suite, "Suite name")->required();
  verify->add_option("--seed", seed, "Seed of the random instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kExitParse, "parse", e.what());
  }

  try {
    if (*analyze) {
      emit(cli::analyze(an), csv);
    } else if (*spectrum) {
      emit(cli::spectrum(sp), csv);
    } else if (*clue) {
      emit(cli::clue_sweep(cl), csv);
    } else if (*game) {
      emit(cli::game(gm), csv);
    } else if (*perco) {
      emit(cli::perco(pc), csv);
    } else if (*mcclue) {
      emit(cli::mc_clue_cmd(mc), csv);
    } else if (*zoo_list) {
      emit(cli::zoo_list(), csv);
    } else if (*verify) {
      std::vector<std::string> names;
      if (suite == "all") {
        names = cluekit::suite_names();
      } else {
        names = {suite};
      }
      bool ok = true;
      json rows = json::array();
      json results = json::array();
      for (const auto& name : names) {
        const auto r = cluekit::run_suite(name, seed);
        ok = ok && r.passed;
        results.push_back(r.to_json());
        rows.push_back({{"suite", r.name}, {"passed", r.passed}, {"checks", r.checks},
                        {"failures", r.failure_count}, {"seconds", r.seconds}});
      }
      json out = names.size() == 1 ? results[0] : json{{"schema", 1}, {"suites", results}};
      out["command"] = "verify";
      out["rows"] = rows;
      emit(out, csv);
      return ok ? 0 : kExitFailed;
    }
  } catch (const cluekit::ParseError& e) {
    return fail(kExitParse, "parse", e.what());
  } catch (const cluekit::DomainError& e) {
    return fail(kExitParse, "domain", e.what());
  } catch (const cluekit::GuardError& e) {
    return fail(kExitGuard, "guard", e.what());
  } catch (const cluekit::DegenerateError& e) {
    return fail(kExitDegenerate, "degenerate", e.what());
  } catch (const cluekit::Error& e) {
    return fail(kExitFailed, "error", e.what());
  }
  return 0;
}
