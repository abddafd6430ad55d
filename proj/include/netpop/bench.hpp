#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netpop/metrics.hpp"

namespace netpop {

/// Simulation experiment grids, addressed by id:
///   fig1, fig2   two-sample ASL/AP curves for Graphon 1 / Graphon 2
///   tab1, tab2   no change-point (Graphon 3 / SBM 1), mean |J-hat|
///   tab3..tab5   single change-point (SBM 1): mean |J-hat|, detect rate, Boysen
///   tab6..tab8   three change-points (Graphon 2): the same three views
struct BenchRequest {
  std::string id;
  double scale = 1.0;               ///< applied to n, and to R unless `replicates` is set
  std::optional<int> replicates;
  std::uint64_t seed = 1;
  double alpha = 0.05;
  double q_constant = 3.0;
};

struct TwoSampleCell {
  TwoSampleScenario scenario;  ///< as run (scaled n)
  Index reference_n;
  std::uint64_t seed;
  std::vector<RateEstimate> rates;  ///< one per method
};

struct ChangePointCell {
  ChangePointScenario scenario;
  Index reference_n;
  std::uint64_t seed;
  std::vector<ChangePointSummary> summaries;  ///< one per method
};

struct BenchmarkReport {
  std::string id;
  std::string title;
  double scale = 1.0;
  int replicates = 0;
  int reference_replicates = 0;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  double q_constant = 3.0;
  std::vector<std::string> methods;
  std::vector<TwoSampleCell> two_sample;
  std::vector<ChangePointCell> changepoint;
  std::vector<std::string> warnings;
};

std::vector<std::string> bench_ids();

/// Throws InvalidInput for an unknown id.
BenchmarkReport run_benchmark(const BenchRequest& request);

/// Aligned plain-text table, one row per grid cell; entries are
/// "estimate (standard error)". Columns for the external detectors CP-GRA
/// and CP-DMNBS are kept and marked n/a.
std::string render_table(const BenchmarkReport& report);

}  // namespace netpop
