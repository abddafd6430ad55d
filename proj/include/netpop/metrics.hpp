#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "netpop/changepoint.hpp"
#include "netpop/two_sample.hpp"

namespace netpop {

struct BoysenDistances {
  std::optional<double> eps1;  ///< max over true b of the distance to the nearest estimate
  std::optional<double> eps2;  ///< max over estimates b of the distance to the nearest truth
};

/// Both distances are unset when `estimated` is empty; `truth` must not be.
BoysenDistances boysen_distances(const std::vector<int>& estimated, const std::vector<int>& truth);

/// Worker threads for replicate loops: NETPOP_WORKERS when set to a positive
/// integer, otherwise the hardware concurrency (at least 1).
int worker_count();

/// Calls task(k) for k = 0..count-1 on `workers` threads and returns the
/// results in index order. The first exception thrown is rethrown.
template <typename Result>
std::vector<Result> run_replicates(int count, const std::function<Result(int)>& task,
                                   int workers = worker_count());

// ---------------------------------------------------------------------------
// Two-sample experiments

enum class TwoSampleMethod { Tw1Avg, Tw1Sbm, Tw1Mnbs, Chi2, NType };

std::string to_string(TwoSampleMethod method);
TwoSampleMethod parse_two_sample_method(const std::string& name);
std::vector<TwoSampleMethod> all_two_sample_methods();

/// Two populations from Graphon 1 or 2. Under the alternative a random
/// floor(log n)-node subset S gets theta added to P_ij for i, j in S.
struct TwoSampleScenario {
  GraphonFamily family = GraphonFamily::Graphon2;
  Index n = 300;
  int m1 = 200;
  int m2 = 200;
  bool alternative = false;
  double theta = 0.0;
  double rho = 1.0;
};

/// The perturbation used in the experiments: Graphon 1 takes 0.05 for
/// m = 30 and 0.02 for m = 200, Graphon 2 takes 0.2 and 0.17.
double reference_theta(GraphonFamily family, int m);

struct TwoSampleDraw {
  LinkProbabilityMatrix p1;
  LinkProbabilityMatrix p2;
  NetworkSample s1;
  NetworkSample s2;
};

TwoSampleDraw simulate_two_sample(const TwoSampleScenario& scenario, const Rng& rng);

TestResult run_two_sample(TwoSampleMethod method, const NetworkSample& s1, const NetworkSample& s2,
                          double alpha, const MnbsConfig& mnbs = {});

struct RateEstimate {
  int rejections = 0;
  int replicates = 0;
  double rate() const { return replicates ? static_cast<double>(rejections) / replicates : 0.0; }
};

/// Replicate k simulates from Rng(seed, k) and runs every method on the
/// same draw; one estimate per method, in the given order.
std::vector<RateEstimate> estimate_rejection_rates(const TwoSampleScenario& scenario,
                                                   const std::vector<TwoSampleMethod>& methods,
                                                   double alpha, int replicates, std::uint64_t seed,
                                                   const MnbsConfig& mnbs = {});

/// Fraction of replicates in which `test` rejects; replicate k receives
/// Rng(seed, k).
RateEstimate estimate_rejection_rate(const std::function<bool(const Rng&)>& test, int replicates,
                                     std::uint64_t seed);

// ---------------------------------------------------------------------------
// Change-point experiments

enum class ChangePointScenarioKind { NoChangeGraphon3, NoChangeSbm1, SingleChangeSbm1, ThreeChangeGraphon2 };

std::string to_string(ChangePointScenarioKind kind);
ChangePointScenarioKind parse_changepoint_scenario(const std::string& name);

struct ChangePointScenario {
  ChangePointScenarioKind kind = ChangePointScenarioKind::SingleChangeSbm1;
  Index n = 200;
  int m = 100;
  double rho = 1.0;
};

/// True change-points: none, {m/2}, or {m/4, m/2, 3m/4} (integer division).
std::vector<int> true_changepoints(const ChangePointScenario& scenario);

/// Series with the true change-points attached as labels.
DynamicNetworkSeries simulate_series(const ChangePointScenario& scenario, const Rng& rng);

struct ChangePointSummary {
  int replicates = 0;
  int detections = 0;            ///< runs with |J-hat| >= 1
  long long total_found = 0;     ///< sum of |J-hat| over all runs
  long long total_found_sq = 0;  ///< sum of |J-hat|^2 over all runs
  bool has_truth = false;        ///< distances are only defined against known change-points
  double eps1_sum = 0.0;         ///< over efficient runs
  double eps2_sum = 0.0;
  double eps1_sq_sum = 0.0;
  double eps2_sq_sum = 0.0;

  double detect_rate() const { return replicates ? static_cast<double>(detections) / replicates : 0.0; }
  double mean_found() const { return replicates ? static_cast<double>(total_found) / replicates : 0.0; }
  /// Mean |J-hat| over runs that found at least one change-point.
  std::optional<double> mean_found_efficient() const;
  std::optional<double> mean_eps1() const;
  std::optional<double> mean_eps2() const;
};

/// Replicate k simulates from Rng(seed, k); every method scans the same series.
std::vector<ChangePointSummary> changepoint_benchmark(const ChangePointScenario& scenario,
                                                      const std::vector<ScanConfig>& methods,
                                                      int replicates, std::uint64_t seed);

}  // namespace netpop

#include "netpop/detail/replicates.hpp"
