#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netpop/graph_model.hpp"

namespace netpop {

enum class EstimatorKind { Avg, Sbm, Mnbs };

std::string to_string(EstimatorKind kind);
EstimatorKind parse_estimator(const std::string& name);

/// Modified neighbourhood smoothing. When `quantile` is unset it follows
/// q = C log n / (sqrt(n) * omega), omega = min(sqrt(n), sqrt(m log n)).
struct MnbsConfig {
  std::optional<double> quantile;
  double constant = 3.0;
};

/// Block-averaging estimator on top of spectral clustering. Without
/// `communities`, K is picked by the largest eigengap (as a log-ratio of
/// consecutive |eigenvalues|) over 1..max_communities (default ceil(n/10)).
struct SbmEstimateConfig {
  std::optional<int> communities;
  std::optional<int> max_communities;
  std::uint64_t seed = 0x5eedULL;
  int restarts = 8;
};

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::Mnbs;
  MnbsConfig mnbs;
  SbmEstimateConfig sbm;
};

/// An estimate of P with what was needed to produce it.
struct Estimate {
  LinkProbabilityMatrix p;
  EstimatorKind kind;
  double quantile = 0.0;      ///< MNBS neighbourhood quantile actually used
  int communities = 0;        ///< SBM community count actually used
  std::vector<int> labels;    ///< SBM cluster labels
};

LinkProbabilityMatrix estimate_avg(const MatrixXd& mean);
inline LinkProbabilityMatrix estimate_avg(const NetworkSample& s) { return estimate_avg(s.mean()); }

double mnbs_default_q(Index n, int m, double constant);

/// d^2(i, i') = max over k != i, i' of |<A_i. - A_i'., A_k.>| / n, where the
/// inner product skips coordinates i and i'. Symmetric with zero diagonal.
MatrixXd mnbs_distances(const MatrixXd& mean);

/// N_i = { i' != i : d^2(i, i') <= type-7 q-quantile of { d^2(i, i') : i' != i } }.
std::vector<std::vector<Index>> mnbs_neighborhoods(const MatrixXd& distances, double q);

Estimate estimate_mnbs(const MatrixXd& mean, int m, const MnbsConfig& cfg);
inline Estimate estimate_mnbs(const NetworkSample& s, const MnbsConfig& cfg) {
  return estimate_mnbs(s.mean(), s.size(), cfg);
}

/// Block means of A-bar over the given partition (diagonal entries excluded).
LinkProbabilityMatrix block_average(const MatrixXd& mean, const std::vector<int>& labels, int blocks);

/// K chosen by the eigengap rule.
int select_community_count(const MatrixXd& mean, int max_communities);

/// Top-K eigenvectors (by |eigenvalue|), row-normalised, clustered with
/// seeded k-means++ / Lloyd; the best of `restarts` runs by inertia.
std::vector<int> spectral_clustering(const MatrixXd& mean, int communities, std::uint64_t seed,
                                     int restarts);

Estimate estimate_sbm(const MatrixXd& mean, const SbmEstimateConfig& cfg);
inline Estimate estimate_sbm(const NetworkSample& s, const SbmEstimateConfig& cfg) {
  return estimate_sbm(s.mean(), cfg);
}

/// Dispatch on cfg.kind; m is the number of networks averaged into `mean`.
Estimate estimate(const MatrixXd& mean, int m, const EstimatorConfig& cfg);

}  // namespace netpop
