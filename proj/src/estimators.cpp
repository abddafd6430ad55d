#include "netpop/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "netpop/error.hpp"

namespace netpop {

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Avg: return "avg";
    case EstimatorKind::Sbm: return "sbm";
    case EstimatorKind::Mnbs: return "mnbs";
  }
  return "?";
}

EstimatorKind parse_estimator(const std::string& name) {
  if (name == "avg" || name == "AVG") return EstimatorKind::Avg;
  if (name == "sbm" || name == "SBM") return EstimatorKind::Sbm;
  if (name == "mnbs" || name == "MNBS") return EstimatorKind::Mnbs;
  throw InvalidInput("unknown estimator '" + name + "' (expected avg, sbm or mnbs)");
}

namespace {

void check_mean(const MatrixXd& mean) {
  if (mean.rows() != mean.cols() || mean.rows() < 2) throw InvalidInput("mean matrix must be square, order >= 2");
}

double type7_quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

}  // namespace

LinkProbabilityMatrix estimate_avg(const MatrixXd& mean) {
  check_mean(mean);
  MatrixXd p = mean;
  p.diagonal().setZero();
  return LinkProbabilityMatrix(std::move(p));
}

double mnbs_default_q(Index n, int m, double constant) {
  if (n < 3) throw DomainError("MNBS needs n >= 3");
  if (m < 1) throw DomainError("MNBS needs m >= 1");
  if (!(constant > 0.0)) throw DomainError("MNBS constant must be positive");
  constexpr double kFloor = 1e-6;
  const double logn = std::log(static_cast<double>(n));
  const double omega = std::min(std::sqrt(static_cast<double>(n)), std::sqrt(m * logn));
  const double q = constant * logn / (std::sqrt(static_cast<double>(n)) * omega);
  return std::clamp(q, kFloor, 1.0 - kFloor);
}

MatrixXd mnbs_distances(const MatrixXd& mean) {
  check_mean(mean);
  const Index n = mean.rows();
  if (n < 3) throw DomainError("MNBS needs n >= 3");
  const MatrixXd gram = mean * mean;  // mean is symmetric
  MatrixXd d = MatrixXd::Zero(n, n);
  Eigen::VectorXd diff(n);
  for (Index i = 0; i < n; ++i) {
    for (Index ip = i + 1; ip < n; ++ip) {
      // <A_i - A_i', A_k> without coordinates i, i' (A has zero diagonal):
      // G(k,i) - G(k,i') - A(i,i') A(k,i') + A(i',i) A(k,i)
      const double c = mean(i, ip);
      diff = ((gram.col(i) + c * mean.col(i)) - (gram.col(ip) + c * mean.col(ip))).cwiseAbs();
      diff(i) = 0.0;
      diff(ip) = 0.0;
      d(i, ip) = d(ip, i) = diff.maxCoeff() / static_cast<double>(n);
    }
  }
  return d;
}

std::vector<std::vector<Index>> mnbs_neighborhoods(const MatrixXd& distances, double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("MNBS quantile must lie in (0, 1)");
  const Index n = distances.rows();
  std::vector<std::vector<Index>> hoods(static_cast<std::size_t>(n));
  std::vector<double> row;
  row.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    row.clear();
    for (Index ip = 0; ip < n; ++ip)
      if (ip != i) row.push_back(distances(ip, i));
    const double cut = type7_quantile(row, q);
    for (Index ip = 0; ip < n; ++ip)
      if (ip != i && distances(ip, i) <= cut) hoods[i].push_back(ip);
  }
  return hoods;
}

Estimate estimate_mnbs(const MatrixXd& mean, int m, const MnbsConfig& cfg) {
  check_mean(mean);
  const Index n = mean.rows();
  const double q = cfg.quantile ? *cfg.quantile : mnbs_default_q(n, m, cfg.constant);
  const auto hoods = mnbs_neighborhoods(mnbs_distances(mean), q);

  // Column i of `smoothed` is row i of P-tilde (A-bar is symmetric).
  MatrixXd smoothed(n, n);
  for (Index i = 0; i < n; ++i) {
    auto col = smoothed.col(i);
    col.setZero();
    for (Index ip : hoods[i]) col += mean.col(ip);
    col /= static_cast<double>(hoods[i].size());
  }
  MatrixXd p = (smoothed + smoothed.transpose()) / 2.0;
  p = p.cwiseMax(0.0).cwiseMin(1.0);
  p.diagonal().setZero();
  return {LinkProbabilityMatrix(std::move(p)), EstimatorKind::Mnbs, q, 0, {}};
}

LinkProbabilityMatrix block_average(const MatrixXd& mean, const std::vector<int>& labels, int blocks) {
  check_mean(mean);
  const Index n = mean.rows();
  if (static_cast<Index>(labels.size()) != n) throw InvalidInput("label vector length differs from n");
  MatrixXd sums = MatrixXd::Zero(blocks, blocks);
  MatrixXd counts = MatrixXd::Zero(blocks, blocks);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      if (i == j) continue;
      sums(labels[i], labels[j]) += mean(i, j);
      counts(labels[i], labels[j]) += 1.0;
    }
  MatrixXd block = MatrixXd::Zero(blocks, blocks);
  for (int b = 0; b < blocks; ++b)
    for (int a = 0; a < blocks; ++a)
      if (counts(a, b) > 0) block(a, b) = sums(a, b) / counts(a, b);
  block = ((block + block.transpose()) / 2.0).eval();
  MatrixXd p(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) p(i, j) = i == j ? 0.0 : block(labels[i], labels[j]);
  return LinkProbabilityMatrix::sanitized(std::move(p));
}

namespace {

struct Spectrum {
  Eigen::VectorXd magnitude;  // |eigenvalue|, descending
  MatrixXd vectors;           // matching eigenvectors
};

Spectrum magnitude_sorted_spectrum(const MatrixXd& mean) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(symmetrized(mean));
  if (solver.info() != Eigen::Success) throw Error("eigendecomposition of A-bar failed");
  const Index n = mean.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[i] = i;
  const auto& ev = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return std::abs(ev(a)) > std::abs(ev(b)); });
  Spectrum s{Eigen::VectorXd(n), MatrixXd(n, n)};
  for (Index k = 0; k < n; ++k) {
    s.magnitude(k) = std::abs(ev(order[k]));
    s.vectors.col(k) = solver.eigenvectors().col(order[k]);
  }
  return s;
}

int eigengap_choice(const Eigen::VectorXd& magnitude, int max_communities) {
  const Index n = magnitude.size();
  const int kmax = static_cast<int>(std::min<Index>(max_communities, n - 1));
  const double eps = 1e-12 * std::max(magnitude(0), std::numeric_limits<double>::min());
  int best = 1;
  double best_gap = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= kmax; ++k) {
    const double gap = std::log(magnitude(k - 1) + eps) - std::log(magnitude(k) + eps);
    if (gap > best_gap) {
      best_gap = gap;
      best = k;
    }
  }
  return best;
}

struct KmeansRun {
  std::vector<int> labels;
  double inertia;
  bool ok;
};

KmeansRun kmeans(const MatrixXd& points, int k, Rng rng) {
  const Index n = points.rows();
  MatrixXd centers(k, points.cols());
  // k-means++ seeding.
  centers.row(0) = points.row(static_cast<Index>(rng.below(static_cast<std::uint64_t>(n))));
  Eigen::VectorXd dist2(n);
  for (int c = 1; c < k; ++c) {
    for (Index i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (int e = 0; e < c; ++e) best = std::min(best, (points.row(i) - centers.row(e)).squaredNorm());
      dist2(i) = best;
    }
    const double total = dist2.sum();
    Index pick = 0;
    if (total > 0) {
      double target = rng.uniform() * total;
      for (pick = 0; pick < n - 1; ++pick) {
        target -= dist2(pick);
        if (target < 0) break;
      }
    } else {
      pick = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    }
    centers.row(c) = points.row(pick);
  }

  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  double inertia = 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    inertia = 0.0;
    for (Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = (points.row(i) - centers.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      inertia += best_d;
      if (labels[i] != best) {
        labels[i] = best;
        changed = true;
      }
    }
    std::vector<Index> sizes(static_cast<std::size_t>(k), 0);
    centers.setZero();
    for (Index i = 0; i < n; ++i) {
      centers.row(labels[i]) += points.row(i);
      ++sizes[labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (sizes[c] == 0) return {labels, inertia, false};
      centers.row(c) /= static_cast<double>(sizes[c]);
    }
    if (!changed) break;
  }
  return {labels, inertia, true};
}

// Relabel so that labels appear in order of first occurrence.
std::vector<int> canonical_labels(const std::vector<int>& labels, int k) {
  std::vector<int> remap(static_cast<std::size_t>(k), -1);
  int next = 0;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (remap[labels[i]] < 0) remap[labels[i]] = next++;
    out[i] = remap[labels[i]];
  }
  return out;
}

}  // namespace

int select_community_count(const MatrixXd& mean, int max_communities) {
  check_mean(mean);
  if (max_communities < 1) throw InvalidInput("max community count must be >= 1");
  return eigengap_choice(magnitude_sorted_spectrum(mean).magnitude, max_communities);
}

std::vector<int> spectral_clustering(const MatrixXd& mean, int communities, std::uint64_t seed,
                                     int restarts) {
  check_mean(mean);
  const Index n = mean.rows();
  if (communities < 1 || communities > n) throw InvalidInput("community count must lie in [1, n]");
  if (communities == 1) return std::vector<int>(static_cast<std::size_t>(n), 0);
  const Spectrum spec = magnitude_sorted_spectrum(mean);
  MatrixXd embedding = spec.vectors.leftCols(communities);
  for (Index i = 0; i < n; ++i) {
    const double norm = embedding.row(i).norm();
    if (norm > 0) embedding.row(i) /= norm;
  }
  KmeansRun best{{}, std::numeric_limits<double>::infinity(), false};
  for (int r = 0; r < std::max(1, restarts); ++r) {
    KmeansRun run = kmeans(embedding, communities, Rng(seed, static_cast<std::uint64_t>(r)));
    if (run.ok && run.inertia < best.inertia) best = std::move(run);
  }
  if (!best.ok)
    throw Error("spectral clustering: k-means left a cluster empty in every restart");
  return canonical_labels(best.labels, communities);
}

Estimate estimate_sbm(const MatrixXd& mean, const SbmEstimateConfig& cfg) {
  check_mean(mean);
  const Index n = mean.rows();
  int k;
  if (cfg.communities) {
    k = *cfg.communities;
    if (k < 1 || k > n) throw InvalidInput("community count must lie in [1, n]");
  } else {
    const int kmax = cfg.max_communities ? *cfg.max_communities
                                         : static_cast<int>(std::ceil(static_cast<double>(n) / 10.0));
    k = select_community_count(mean, std::max(1, kmax));
  }
  std::vector<int> labels = spectral_clustering(mean, k, cfg.seed, cfg.restarts);
  LinkProbabilityMatrix p = block_average(mean, labels, k);
  return {std::move(p), EstimatorKind::Sbm, 0.0, k, std::move(labels)};
}

Estimate estimate(const MatrixXd& mean, int m, const EstimatorConfig& cfg) {
  switch (cfg.kind) {
    case EstimatorKind::Avg: return {estimate_avg(mean), EstimatorKind::Avg, 0.0, 0, {}};
    case EstimatorKind::Sbm: return estimate_sbm(mean, cfg.sbm);
    case EstimatorKind::Mnbs: return estimate_mnbs(mean, m, cfg.mnbs);
  }
  throw InvalidInput("unknown estimator");
}

}  // namespace netpop
