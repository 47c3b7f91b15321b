#pragma once

// Reproducibility harness and command-line surface.
//
// Exit codes: 0 success, 1 a check found violations, 2 usage or argument
// error, 3 an enumeration cap was exceeded.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "exgraph/exact_inference.hpp"
#include "exgraph/serialize.hpp"

namespace exgraph {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitUsage = 2,
  kExitResource = 3,
};

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = true;

  bool operator==(const CheckResult&) const = default;
};

struct RunReport {
  std::string command;
  Json inputs = Json::object();
  std::optional<Json> schedule;
  std::optional<std::uint64_t> seed;
  Json results = Json::object();
  Json tolerances = Json::object();
  std::vector<CheckResult> checks;

  bool passed() const;
  Json to_json() const;
  static RunReport from_json(const Json& doc);

  bool operator==(const RunReport&) const = default;
};

// Compares empirical graph frequencies from `draws` pipeline samples under
// `sampling` with the exact law of `exact`; a cell fails when it deviates by
// more than `se_threshold` standard errors.
RunReport mc_vs_exact(const RateSchedule& sampling, const RateSchedule& exact, int n,
                      std::uint64_t draws, std::uint64_t seed, double se_threshold = 4.0,
                      const InferenceOptions& options = {});

// max over graphs G on [n] and σ ∈ S_n of |P(G) − P(σG)|.
double exchangeability_discrepancy(const RateSchedule& schedule, int n,
                                   const InferenceOptions& options = {});

// Entry point behind the `exgraph` executable. `args` excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            std::istream& in);

}  // namespace exgraph
