#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pictk/report.hpp"

namespace pictk {

inline constexpr std::uint64_t kDefaultSeed = 0x5eed;

struct SuiteConfig {
  std::string suite;
  std::uint64_t seed = kDefaultSeed;
  double tol = 1e-9;
  std::string out;  // output directory; empty disables file output
  nlohmann::json params = nlohmann::json::object();

  void validate() const;
};

struct SuiteResult {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<Report> reports;
  std::vector<std::pair<std::string, CsvTable>> tables;  // file stem, table

  bool pass() const;
};

// Names accepted by run_suite.
const std::vector<std::string>& suite_names();

// Seed after applying the PIC_TOOLKIT_SEED override.
std::uint64_t effective_seed(std::uint64_t configured);

// Deterministic given the config; throws InputError on bad parameters.
SuiteResult run_suite(const SuiteConfig& cfg);

// Report document without timestamps; byte-identical across reruns.
nlohmann::json suite_json(const SuiteConfig& cfg, const SuiteResult& r);

// Writes <out>/<suite>.json, <out>/<suite>.meta.json and <out>/<stem>.csv.
// Returns the written paths.
std::vector<std::string> write_suite_outputs(const SuiteConfig& cfg, const SuiteResult& r);

}  // namespace pictk
