#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace cluekit {

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::uint64_t checks = 0;
  nlohmann::json details = nlohmann::json::object();
  // Serialized violating instances (first kMaxReportedFailures).
  std::vector<nlohmann::json> failures;
  std::uint64_t failure_count = 0;
  double seconds = 0.0;

  nlohmann::json to_json() const;
};

inline constexpr std::size_t kMaxReportedFailures = 20;
inline constexpr std::uint64_t kDefaultSuiteSeed = 20240601;

// transitive-bound, spectral-identity, efron-stein, sandwiches, games, shearer,
// revealment, covariance-lemma, perco, montecarlo, surrogates.
std::vector<std::string> suite_names();

// Throws ParseError for an unknown suite.
SuiteResult run_suite(const std::string& name, std::uint64_t seed = kDefaultSuiteSeed);

}  // namespace cluekit
