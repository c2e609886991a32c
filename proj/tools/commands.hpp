#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cluekit/core.hpp"
#include "cluekit/perco.hpp"
#include "cluekit/zoo.hpp"

namespace cluekit::cli {

// A loaded function: table when it fits the exact engine, evaluator for
// zoo specs of any size.
struct LoadedFunction {
  std::string name;
  int n = 0;
  std::optional<FunctionTable> table;
  std::optional<ZooFunction> zoo;

  const FunctionTable& require_table() const;
};

// Zoo spec, or a JSON function file when the argument ends in ".json".
// bias, when given, puts a zoo function on the iid measure with P[+1] = bias.
LoadedFunction load_function(const std::string& spec, std::optional<double> bias, bool need_table);

// Comma-separated indices, 0x hex mask, "none" or "all".
SubsetMask parse_subset(const std::string& text, int n);
// Index list with lo-hi ranges, for functions beyond 64 coordinates.
std::vector<int> parse_subset_indices(const std::string& text, int n);
// Torus edges h:x,y / v:x,y separated by ';', or plain indices.
SubsetMask parse_torus_subset(const std::string& text, const TorusSpec& T);
std::vector<std::string> parse_list(const std::string& text);

struct AnalyzeArgs {
  std::string fn;
  std::optional<double> bias;
  std::string subset;
  std::string metrics = "l2";
  std::optional<double> bernoulli;
};
nlohmann::json analyze(const AnalyzeArgs& a);

struct SpectrumArgs {
  std::string fn;
  std::optional<double> bias;
  int top = 16;
};
nlohmann::json spectrum(const SpectrumArgs& a);

struct ClueArgs {
  std::string fn;
  std::optional<double> bias;
  std::vector<std::string> subsets;
  bool all = false;
  std::string metrics = "l2";
};
nlohmann::json clue_sweep(const ClueArgs& a);

struct GameArgs {
  std::string fn;
  std::optional<double> bias;
  bool iclue = false;
  std::optional<double> power;
  std::string checks = "shapley,supermod,core,bound";
};
nlohmann::json game(const GameArgs& a);

struct PercoArgs {
  std::string rect;
  std::optional<int> torus;
  bool exact = false;
  std::optional<std::uint64_t> mc;
  std::optional<std::uint64_t> seed;
  bool avg_clue = false;
  std::string subset;
  std::string displacement;
};
nlohmann::json perco(const PercoArgs& a);

struct McClueArgs {
  std::string fn;
  std::string subset;
  std::uint64_t outer = 2000;
  std::uint64_t inner = 20;
  std::optional<std::uint64_t> seed;
  bool uncorrected = false;
  std::optional<double> stability;
  std::optional<double> bernoulli;
  std::uint64_t sets = 100;
};
nlohmann::json mc_clue_cmd(const McClueArgs& a);

nlohmann::json zoo_list();

// The "rows" array of a report as CSV (header from the first row's keys).
std::string to_csv(const nlohmann::json& report);

}  // namespace cluekit::cli
