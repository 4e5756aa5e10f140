#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mgarch/asymptotics.hpp"
#include "mgarch/simulate.hpp"

namespace mgarch {

struct MonteCarloConfig {
  GarchSpec spec;
  std::vector<std::size_t> ns;
  std::size_t reps = 1;
  std::uint64_t seed = 0;
  std::size_t burn_in = 1000;
  bool with_se = false;
  std::optional<Index> bandwidth;
  EstimateOptions estimate;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct MonteCarloRow {
  std::size_t rep = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string status = "ok";  // "ok" or an ErrorCode name
  std::string message;
  Vector estimate;            // (c, vec A, vec B)
  Vector error;               // estimate - truth
  double max_abs_error = 0;
  Vector std_errors;          // with_se only
  std::vector<int> covered;   // with_se only: |error| <= 1.959964 se
};

struct MonteCarloSummary {
  std::size_t n = 0;
  std::size_t runs = 0;
  std::size_t failures = 0;
  double median_max_abs_error = 0;  // over successful runs, NaN if none
  std::vector<double> coverage;     // per parameter, with_se only
};

struct MonteCarloResult {
  std::vector<MonteCarloRow> rows;  // ordered by (rep, n index)
  std::vector<MonteCarloSummary> summary;
  Index dbar = 0;
  bool with_se = false;
};

/// Runs every (replication, n) pair. Failures are recorded per row, never thrown.
/// Output order does not depend on the number of threads.
MonteCarloResult run_montecarlo(const MonteCarloConfig& config);

void write_montecarlo_csv(std::ostream& os, const MonteCarloResult& result);

}  // namespace mgarch
