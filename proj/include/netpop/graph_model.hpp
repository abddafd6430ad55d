#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "netpop/linalg.hpp"
#include "netpop/rng.hpp"

namespace netpop {

using Index = Eigen::Index;
using AdjacencyStorage = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Symmetric matrix of edge probabilities in [0, 1] with zero diagonal.
class LinkProbabilityMatrix {
 public:
  /// Validates range, symmetry (exact) and zero diagonal; throws InvalidInput.
  explicit LinkProbabilityMatrix(MatrixXd p);

  /// Zeroes the diagonal and clamps into [0, 1] before validating symmetry.
  static LinkProbabilityMatrix sanitized(MatrixXd p);

  const MatrixXd& matrix() const { return p_; }
  Index order() const { return p_.rows(); }
  double operator()(Index i, Index j) const { return p_(i, j); }

 private:
  MatrixXd p_;
};

/// Binary symmetric adjacency matrix with zero diagonal.
class AdjacencyMatrix {
 public:
  explicit AdjacencyMatrix(AdjacencyStorage a);

  const AdjacencyStorage& matrix() const { return a_; }
  Index order() const { return a_.rows(); }
  std::uint8_t operator()(Index i, Index j) const { return a_(i, j); }
  Index edge_count() const;

  friend bool operator==(const AdjacencyMatrix& x, const AdjacencyMatrix& y) {
    return x.a_.rows() == y.a_.rows() && x.a_ == y.a_;
  }

 private:
  AdjacencyStorage a_;
};

/// m >= 1 adjacency matrices of common order together with their entrywise mean.
class NetworkSample {
 public:
  explicit NetworkSample(std::vector<AdjacencyMatrix> matrices);

  const std::vector<AdjacencyMatrix>& matrices() const { return matrices_; }
  const MatrixXd& mean() const { return mean_; }
  Index order() const { return mean_.rows(); }
  int size() const { return static_cast<int>(matrices_.size()); }

 private:
  std::vector<AdjacencyMatrix> matrices_;
  MatrixXd mean_;
};

/// Entrywise average of adjacency matrices [first, last).
MatrixXd mean_adjacency(const std::vector<AdjacencyMatrix>& matrices, std::size_t first,
                        std::size_t last);

enum class GraphonFamily { Graphon1, Graphon2, Graphon3, Graphon4 };

struct GraphonSpec {
  GraphonFamily family;
  std::vector<double> latent;  ///< one coordinate in [0, 1] per node
};

/// Stochastic block model; labels are 0-based block indices.
struct SbmSpec {
  MatrixXd block_matrix;
  std::vector<int> membership;
};

/// The four simulation graphons. Graphon1 needs the block count
/// K = floor(log n); for the others the argument is ignored.
/// Graphons 2 and 4 take their additive constant at u = v = 0.
double graphon_value(GraphonFamily family, double u, double v, int blocks = 1);

/// iid Uniform(0, 1) latent coordinates.
std::vector<double> draw_latent(Index n, Rng& rng);

LinkProbabilityMatrix graphon_link_matrix(const GraphonSpec& spec);
LinkProbabilityMatrix sbm_link_matrix(const SbmSpec& spec);

/// Two-block model with Lambda = [[0.6 + theta0, 0.3], [0.3, 0.6]]; node i
/// (1-based) is in block 1 iff i <= floor(2n / log n).
SbmSpec sbm1_spec(Index n, double theta0);

/// Upper-triangle entries are independent Bernoulli(P_ij), mirrored.
///
/// Pairs are visited column by column (j = 1..n-1, then i = 0..j-1); each
/// 64-bit Philox output supplies two draws (low 32 bits first), and an edge
/// is present iff the 32-bit word is below P_ij * 2^32.
AdjacencyMatrix sample_adjacency(const LinkProbabilityMatrix& p, Rng& rng);

/// m independent draws; draw k uses rng.fork(k).
NetworkSample sample_network(const LinkProbabilityMatrix& p, int m, const Rng& rng);

LinkProbabilityMatrix scale_sparsity(const LinkProbabilityMatrix& p, double rho);

/// Adds theta to P_ij for i != j both in `subset`; the result must stay
/// in [0, 1] (DomainError otherwise, no clamping).
LinkProbabilityMatrix perturb_subset(const LinkProbabilityMatrix& p,
                                     const std::vector<Index>& subset, double theta);

enum class ChangeKind { Switch, Merge, Regenerate };

/// Community changes between node sets paired in order (first[k] with second[k]).
///   Switch:     nodes first[k] and second[k] exchange rows and columns.
///   Merge:      row/column first[k] is overwritten by row/column second[k].
///   Regenerate: P_ij for i in first, j in second is redrawn from Graphon 4
///               at fresh uniform coordinates (one per node, from rng).
LinkProbabilityMatrix apply_change(const LinkProbabilityMatrix& p, ChangeKind kind,
                                   const std::vector<Index>& first,
                                   const std::vector<Index>& second, Rng& rng);

/// `count` distinct node indices chosen uniformly without replacement, in
/// the order drawn.
std::vector<Index> random_subset(Index n, Index count, Rng& rng);

}  // namespace netpop
