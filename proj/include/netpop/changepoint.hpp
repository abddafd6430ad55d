#pragma once

#include <map>
#include <optional>
#include <vector>

#include "netpop/estimators.hpp"
#include "netpop/graph_model.hpp"
#include "netpop/tracy_widom.hpp"

namespace netpop {

/// Time-ordered adjacency matrices A_1..A_m of a common order. Times are
/// 1-based throughout this module. `labels` carries known change-points
/// when the series comes from a simulation or an annotated manifest.
class DynamicNetworkSeries {
 public:
  explicit DynamicNetworkSeries(std::vector<AdjacencyMatrix> matrices,
                                std::optional<std::vector<int>> labels = std::nullopt);

  const std::vector<AdjacencyMatrix>& matrices() const { return matrices_; }
  const std::optional<std::vector<int>>& labels() const { return labels_; }
  int length() const { return static_cast<int>(matrices_.size()); }
  Index order() const { return matrices_.front().order(); }

  /// Entrywise mean of A_first..A_last (1-based, inclusive).
  MatrixXd window_mean(int first, int last) const;

 private:
  std::vector<AdjacencyMatrix> matrices_;
  std::optional<std::vector<int>> labels_;
};

struct ScanConfig {
  std::optional<int> window;  ///< h; round(sqrt(m)) when unset
  EstimatorConfig estimator;
  std::optional<double> alpha_override;
};

/// round(sqrt(m)).
int default_window(int m);

/// h from the config (or its default), validated against 2 <= h, 2h <= m.
int resolve_window(const ScanConfig& cfg, int m);

/// T(t, h): the TW1 statistic between A_{t-h+1..t} and A_{t+1..t+h}, each
/// window estimated separately and standardised with m1 = m2 = h.
double scan_statistic(const DynamicNetworkSeries& series, int t, int h,
                      const EstimatorConfig& estimator);

/// Times t with T(t) >= T(t') for every t' in (t - h, t + h) present in
/// `values`. Within a run of exactly equal values only the earliest time
/// survives: t is dropped when some t' in (t - h, t) has T(t') == T(t).
std::vector<int> local_maximizers(const std::map<int, double>& values, int h);

/// alpha(n, h) = 1/2 - (1 - 1/n)^{1/(2h)} / 2, evaluated without cancellation.
double threshold_alpha(Index n, int h);

struct Threshold {
  double value;   ///< max{tau_alpha, n^{2/3} (delta - 4) - tau_alpha}
  double alpha;
  double tau;     ///< tau_alpha
  double delta;   ///< sigma_1(V1)
  bool clamped;   ///< tau_alpha fell beyond the TW1 table
};

Threshold dynamic_threshold(int h, const LinkProbabilityMatrix& p1, const LinkProbabilityMatrix& p2,
                            const Tw1Table& table = Tw1Table::builtin(),
                            std::optional<double> alpha_override = std::nullopt);

struct CandidateTrace {
  int t;
  double statistic;
  bool local_max;
  std::optional<Threshold> threshold;  ///< evaluated for local maximizers only
  bool detected;
};

struct ChangePointResult {
  std::vector<int> estimated;
  std::vector<CandidateTrace> trace;  ///< one entry per t in [h, m - h]
  int window = 0;
  EstimatorKind estimator = EstimatorKind::Mnbs;
};

/// Scan, keep h-local maximizers, report those with T(t, h) > Delta(t).
ChangePointResult detect_changepoints(const DynamicNetworkSeries& series, const ScanConfig& cfg,
                                      const Tw1Table& table = Tw1Table::builtin());

}  // namespace netpop
