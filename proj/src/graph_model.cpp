#include "netpop/graph_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "netpop/error.hpp"

namespace netpop {

namespace {

std::string at(Index i, Index j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

void check_probability_matrix(const MatrixXd& p) {
  if (p.rows() != p.cols()) throw InvalidInput("link probability matrix is not square");
  if (p.rows() < 2) throw InvalidInput("link probability matrix must have order >= 2");
  const Index n = p.rows();
  for (Index j = 0; j < n; ++j) {
    if (p(j, j) != 0.0) throw InvalidInput("link probability matrix: nonzero diagonal at " + at(j, j));
    for (Index i = 0; i < n; ++i) {
      const double v = p(i, j);
      if (!(v >= 0.0 && v <= 1.0))
        throw InvalidInput("link probability matrix: entry outside [0,1] at " + at(i, j));
      if (v != p(j, i)) throw InvalidInput("link probability matrix: asymmetric at " + at(i, j));
    }
  }
}

// Open-interval block index of Graphon 1: k in 1..K with (k-1)/K < u < k/K,
// or 0 when u sits on a boundary (or outside (0, 1)).
int graphon1_block(double u, int blocks) {
  for (int k = 1; k <= blocks; ++k) {
    const double lo = static_cast<double>(k - 1) / blocks;
    const double hi = static_cast<double>(k) / blocks;
    if (u > lo && u < hi) return k;
  }
  return 0;
}

double oscillating(double u, double v, double scale, double offset) {
  const double r = u * u + v * v;
  if (r == 0.0) return offset;
  return r / scale * std::cos(1.0 / r) + offset;
}

int graphon1_blocks(Index n) { return std::max(1, static_cast<int>(std::floor(std::log(double(n))))); }

}  // namespace

LinkProbabilityMatrix::LinkProbabilityMatrix(MatrixXd p) : p_(std::move(p)) {
  check_probability_matrix(p_);
}

LinkProbabilityMatrix LinkProbabilityMatrix::sanitized(MatrixXd p) {
  p = p.cwiseMax(0.0).cwiseMin(1.0);
  p.diagonal().setZero();
  return LinkProbabilityMatrix(std::move(p));
}

AdjacencyMatrix::AdjacencyMatrix(AdjacencyStorage a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols()) throw InvalidInput("adjacency matrix is not square");
  if (a_.rows() < 1) throw InvalidInput("adjacency matrix is empty");
  const Index n = a_.rows();
  for (Index j = 0; j < n; ++j) {
    if (a_(j, j) != 0) throw InvalidInput("adjacency matrix: nonzero diagonal at " + at(j, j));
    for (Index i = 0; i < j; ++i) {
      if (a_(i, j) > 1) throw InvalidInput("adjacency matrix: non-binary entry at " + at(i, j));
      if (a_(i, j) != a_(j, i)) throw InvalidInput("adjacency matrix: asymmetric at " + at(i, j));
    }
  }
}

Index AdjacencyMatrix::edge_count() const {
  Index count = 0;
  for (Index j = 0; j < a_.cols(); ++j)
    for (Index i = 0; i < j; ++i) count += a_(i, j);
  return count;
}

MatrixXd mean_adjacency(const std::vector<AdjacencyMatrix>& matrices, std::size_t first,
                        std::size_t last) {
  if (first >= last || last > matrices.size()) throw InvalidInput("empty range of adjacency matrices");
  const Index n = matrices[first].order();
  Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic> counts =
      Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  for (std::size_t k = first; k < last; ++k) {
    if (matrices[k].order() != n) throw InvalidInput("adjacency matrices differ in order");
    counts += matrices[k].matrix().cast<std::int32_t>();
  }
  return counts.cast<double>() / static_cast<double>(last - first);
}

NetworkSample::NetworkSample(std::vector<AdjacencyMatrix> matrices) : matrices_(std::move(matrices)) {
  if (matrices_.empty()) throw InvalidInput("network sample is empty");
  mean_ = mean_adjacency(matrices_, 0, matrices_.size());
}

double graphon_value(GraphonFamily family, double u, double v, int blocks) {
  switch (family) {
    case GraphonFamily::Graphon1: {
      const int ku = graphon1_block(u, blocks);
      const int kv = graphon1_block(v, blocks);
      if (ku != 0 && ku == kv) return static_cast<double>(ku) / (blocks + 1);
      return 0.3 / (blocks + 1);
    }
    case GraphonFamily::Graphon2:
      return oscillating(u, v, 3.0, 0.15);
    case GraphonFamily::Graphon3:
      return std::sin(5.0 * std::numbers::pi * (u + v - 1.0) + 1.0) / 2.0 + 0.5;
    case GraphonFamily::Graphon4:
      return oscillating(u, v, 10.0, 0.05);
  }
  throw InvalidInput("unknown graphon family");
}

std::vector<double> draw_latent(Index n, Rng& rng) {
  std::vector<double> xi(static_cast<std::size_t>(n));
  for (auto& x : xi) x = rng.uniform();
  return xi;
}

LinkProbabilityMatrix graphon_link_matrix(const GraphonSpec& spec) {
  const Index n = static_cast<Index>(spec.latent.size());
  if (n < 2) throw InvalidInput("graphon spec needs at least two latent coordinates");
  for (double x : spec.latent)
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidInput("latent coordinate outside [0, 1]");
  const int blocks = graphon1_blocks(n);
  MatrixXd p = MatrixXd::Zero(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < j; ++i) {
      const double v = graphon_value(spec.family, spec.latent[i], spec.latent[j], blocks);
      p(i, j) = p(j, i) = std::clamp(v, 0.0, 1.0);
    }
  return LinkProbabilityMatrix(std::move(p));
}

LinkProbabilityMatrix sbm_link_matrix(const SbmSpec& spec) {
  const MatrixXd& lambda = spec.block_matrix;
  const Index k = lambda.rows();
  if (k < 1 || lambda.cols() != k) throw InvalidInput("block matrix must be square and nonempty");
  if ((lambda - lambda.transpose()).cwiseAbs().maxCoeff() != 0.0)
    throw InvalidInput("block matrix is not symmetric");
  if (lambda.minCoeff() < 0.0 || lambda.maxCoeff() > 1.0)
    throw InvalidInput("block matrix entries must lie in [0, 1]");
  const Index n = static_cast<Index>(spec.membership.size());
  for (int g : spec.membership)
    if (g < 0 || g >= k) throw InvalidInput("membership label out of range");
  MatrixXd p = MatrixXd::Zero(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < j; ++i)
      p(i, j) = p(j, i) = lambda(spec.membership[i], spec.membership[j]);
  return LinkProbabilityMatrix(std::move(p));
}

SbmSpec sbm1_spec(Index n, double theta0) {
  if (n < 3) throw InvalidInput("SBM 1 needs n >= 3");
  SbmSpec spec;
  spec.block_matrix.resize(2, 2);
  spec.block_matrix << 0.6 + theta0, 0.3, 0.3, 0.6;
  const auto first = static_cast<Index>(std::floor(2.0 * n / std::log(double(n))));
  spec.membership.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) spec.membership[i] = (i + 1 <= first) ? 0 : 1;
  return spec;
}

AdjacencyMatrix sample_adjacency(const LinkProbabilityMatrix& p, Rng& rng) {
  const Index n = p.order();
  const MatrixXd& pm = p.matrix();
  AdjacencyStorage a = AdjacencyStorage::Zero(n, n);
  std::uint64_t word = 0;
  bool have_high = false;
  for (Index j = 1; j < n; ++j) {
    for (Index i = 0; i < j; ++i) {
      std::uint32_t draw;
      if (have_high) {
        draw = static_cast<std::uint32_t>(word >> 32);
        have_high = false;
      } else {
        word = rng();
        draw = static_cast<std::uint32_t>(word);
        have_high = true;
      }
      a(i, j) = static_cast<double>(draw) < pm(i, j) * 4294967296.0 ? 1 : 0;
    }
  }
  a.triangularView<Eigen::StrictlyLower>() = a.transpose();
  return AdjacencyMatrix(std::move(a));
}

NetworkSample sample_network(const LinkProbabilityMatrix& p, int m, const Rng& rng) {
  if (m < 1) throw InvalidInput("sample size must be >= 1");
  std::vector<AdjacencyMatrix> draws;
  draws.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    Rng stream = rng.fork(static_cast<std::uint64_t>(k));
    draws.push_back(sample_adjacency(p, stream));
  }
  return NetworkSample(std::move(draws));
}

LinkProbabilityMatrix scale_sparsity(const LinkProbabilityMatrix& p, double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) throw DomainError("sparsity factor must lie in (0, 1]");
  return LinkProbabilityMatrix(rho * p.matrix());
}

LinkProbabilityMatrix perturb_subset(const LinkProbabilityMatrix& p,
                                     const std::vector<Index>& subset, double theta) {
  const Index n = p.order();
  MatrixXd q = p.matrix();
  std::vector<char> member(static_cast<std::size_t>(n), 0);
  for (Index i : subset) {
    if (i < 0 || i >= n) throw InvalidInput("perturbation subset index out of range");
    member[i] = 1;
  }
  for (Index j = 0; j < n; ++j) {
    if (!member[j]) continue;
    for (Index i = 0; i < n; ++i) {
      if (i == j || !member[i]) continue;
      const double v = p(i, j) + theta;
      if (!(v >= 0.0 && v <= 1.0))
        throw DomainError("perturbation moves P" + at(i, j) + " outside [0, 1]");
      q(i, j) = v;
    }
  }
  return LinkProbabilityMatrix(std::move(q));
}

LinkProbabilityMatrix apply_change(const LinkProbabilityMatrix& p, ChangeKind kind,
                                   const std::vector<Index>& first,
                                   const std::vector<Index>& second, Rng& rng) {
  const Index n = p.order();
  auto check_range = [n](const std::vector<Index>& set) {
    for (Index i : set)
      if (i < 0 || i >= n) throw InvalidInput("change set index out of range");
  };
  check_range(first);
  check_range(second);

  if (kind == ChangeKind::Regenerate) {
    MatrixXd q = p.matrix();
    std::vector<double> xi_first(first.size()), xi_second(second.size());
    for (auto& x : xi_first) x = rng.uniform();
    for (auto& x : xi_second) x = rng.uniform();
    for (std::size_t a = 0; a < first.size(); ++a)
      for (std::size_t b = 0; b < second.size(); ++b) {
        const Index i = first[a], j = second[b];
        if (i == j) continue;
        const double v =
            std::clamp(graphon_value(GraphonFamily::Graphon4, xi_first[a], xi_second[b]), 0.0, 1.0);
        q(i, j) = q(j, i) = v;
      }
    q.diagonal().setZero();
    return LinkProbabilityMatrix(std::move(q));
  }

  if (first.size() != second.size())
    throw InvalidInput("switch/merge need node sets of equal size");

  // Node relabelling: P'(a, b) = P(map(a), map(b)).
  std::vector<Index> map(static_cast<std::size_t>(n));
  std::iota(map.begin(), map.end(), Index{0});
  std::vector<char> touched(static_cast<std::size_t>(n), 0);
  for (std::size_t k = 0; k < first.size(); ++k) {
    const Index i = first[k], j = second[k];
    if (i == j) continue;
    if (kind == ChangeKind::Switch) {
      if (touched[i] || touched[j]) throw InvalidInput("switch pairs must not share nodes");
      touched[i] = touched[j] = 1;
      map[i] = j;
      map[j] = i;
    } else {
      if (touched[i]) throw InvalidInput("merge target node listed twice");
      touched[i] = 1;
      map[i] = j;
    }
  }
  if (kind == ChangeKind::Merge) {
    for (std::size_t k = 0; k < first.size(); ++k)
      if (first[k] != second[k] && touched[second[k]])
        throw InvalidInput("merge source node is itself overwritten");
  }
  MatrixXd q(n, n);
  for (Index b = 0; b < n; ++b)
    for (Index a = 0; a < n; ++a) q(a, b) = a == b ? 0.0 : p(map[a], map[b]);
  return LinkProbabilityMatrix(std::move(q));
}

std::vector<Index> random_subset(Index n, Index count, Rng& rng) {
  if (count < 0 || count > n) throw InvalidInput("subset size out of range");
  std::vector<Index> nodes(static_cast<std::size_t>(n));
  std::iota(nodes.begin(), nodes.end(), Index{0});
  // Partial Fisher-Yates.
  for (Index k = 0; k < count; ++k) {
    const Index r = k + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - k)));
    std::swap(nodes[k], nodes[r]);
  }
  nodes.resize(static_cast<std::size_t>(count));
  return nodes;
}

}  // namespace netpop
