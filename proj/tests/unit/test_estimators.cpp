#include <gtest/gtest.h>

#include <cmath>

#include "netpop/estimators.hpp"

using namespace netpop;

namespace {

MatrixXd random_mean(Index n, int m, std::uint64_t seed) {
  Rng rng(seed);
  const auto p = graphon_link_matrix({GraphonFamily::Graphon3, draw_latent(n, rng)});
  return sample_network(p, m, Rng(seed, 1)).mean();
}

// Direct transcription of the distance definition, for small n.
MatrixXd brute_distances(const MatrixXd& a) {
  const Index n = a.rows();
  MatrixXd d = MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index ip = 0; ip < n; ++ip) {
      if (i == ip) continue;
      double best = 0.0;
      for (Index k = 0; k < n; ++k) {
        if (k == i || k == ip) continue;
        double dot = 0.0;
        for (Index l = 0; l < n; ++l)
          if (l != i && l != ip) dot += (a(i, l) - a(ip, l)) * a(k, l);
        best = std::max(best, std::abs(dot));
      }
      d(i, ip) = best / static_cast<double>(n);
    }
  return d;
}

}  // namespace

TEST(EstimateAvg, ExactOnMean) {
  const MatrixXd mean = random_mean(20, 5, 3);
  const auto p = estimate_avg(mean);
  for (Index i = 0; i < 20; ++i)
    for (Index j = 0; j < 20; ++j) {
      if (i != j) {
        EXPECT_EQ(p(i, j), mean(i, j));
      }
    }
}

TEST(EstimateAvg, SmallExamples) {
  AdjacencyStorage a = AdjacencyStorage::Zero(3, 3);
  a(0, 1) = a(1, 0) = 1;
  const AdjacencyMatrix one(a);
  const AdjacencyMatrix zero(AdjacencyStorage::Zero(3, 3));
  EXPECT_EQ(estimate_avg(NetworkSample({one})).matrix(), one.matrix().cast<double>());
  EXPECT_DOUBLE_EQ(estimate_avg(NetworkSample({one, zero}))(0, 1), 0.5);
}

TEST(MnbsDefaultQ, Examples) {
  EXPECT_NEAR(mnbs_default_q(100, 100, 3.0), 3 * std::log(100.0) / 100.0, 1e-15);
  EXPECT_NEAR(mnbs_default_q(100, 100, 3.0), 0.1382, 1e-4);
  EXPECT_NEAR(mnbs_default_q(100, 1, 3.0), 0.6437, 1e-4);
  EXPECT_GE(mnbs_default_q(100, 100, 1e-300), 1e-6);
  EXPECT_LT(mnbs_default_q(4, 1, 1e6), 1.0);
  EXPECT_THROW(mnbs_default_q(100, 100, 0.0), DomainError);
  EXPECT_THROW(mnbs_default_q(2, 100, 3.0), DomainError);
}

TEST(Mnbs, DistancesMatchBruteForce) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const MatrixXd mean = random_mean(12, 3, seed);
    const MatrixXd fast = mnbs_distances(mean);
    const MatrixXd slow = brute_distances(mean);
    EXPECT_LT((fast - slow).cwiseAbs().maxCoeff(), 1e-14) << "seed " << seed;
  }
}

TEST(Mnbs, NeighbourhoodProperties) {
  const MatrixXd mean = random_mean(40, 4, 5);
  const MatrixXd d = mnbs_distances(mean);
  for (double q : {1e-6, 0.1, 0.5, 0.99}) {
    const auto hoods = mnbs_neighborhoods(d, q);
    for (Index i = 0; i < 40; ++i) {
      ASSERT_GE(hoods[i].size(), 1u);
      EXPECT_EQ(std::count(hoods[i].begin(), hoods[i].end(), i), 0);
    }
  }
}

TEST(Mnbs, NeighbourhoodTiesAreIncluded) {
  // All distances equal: every other node lies on the quantile.
  MatrixXd d = MatrixXd::Constant(5, 5, 0.25);
  d.diagonal().setZero();
  const auto hoods = mnbs_neighborhoods(d, 0.01);
  for (const auto& h : hoods) EXPECT_EQ(h.size(), 4u);
}

TEST(Mnbs, EstimateIsValidAndSymmetric) {
  const MatrixXd mean = random_mean(50, 6, 9);
  const Estimate e = estimate_mnbs(mean, 6, {});
  EXPECT_EQ(e.p.matrix(), e.p.matrix().transpose());
  EXPECT_GE(e.p.matrix().minCoeff(), 0.0);
  EXPECT_LE(e.p.matrix().maxCoeff(), 1.0);
  EXPECT_DOUBLE_EQ(e.quantile, mnbs_default_q(50, 6, 3.0));
}

TEST(Mnbs, ConstantProbabilityMonteCarlo) {
  MatrixXd pm = MatrixXd::Constant(200, 200, 0.3);
  pm.diagonal().setZero();
  const LinkProbabilityMatrix p(pm);
  int good = 0;
  for (int r = 0; r < 100; ++r) {
    const NetworkSample s = sample_network(p, 50, Rng(31337, r));
    const Estimate e = estimate_mnbs(s, {});
    good += (e.p.matrix() - pm).cwiseAbs().maxCoeff() < 0.05;
  }
  EXPECT_GE(good, 95);
}

TEST(BlockAverage, MatchesBruteForce) {
  const Index n = 18;
  const MatrixXd mean = random_mean(n, 4, 21);
  std::vector<int> labels(n);
  for (Index i = 0; i < n; ++i) labels[i] = static_cast<int>((i * 7) % 3);
  const auto p = block_average(mean, labels, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double sum = 0.0;
      int count = 0;
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
          if (i != j && labels[i] == a && labels[j] == b) {
            sum += mean(i, j);
            ++count;
          }
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
          if (i != j && labels[i] == a && labels[j] == b) {
            EXPECT_NEAR(p(i, j), sum / count, 1e-15);
          }
        }
    }
}

TEST(Sbm, SingleCommunityIsOffDiagonalMean) {
  const MatrixXd mean = random_mean(20, 3, 4);
  SbmEstimateConfig cfg;
  cfg.communities = 1;
  const Estimate e = estimate_sbm(mean, cfg);
  const double expect = (mean.sum() - mean.trace()) / (20.0 * 19.0);
  for (Index i = 0; i < 20; ++i)
    for (Index j = 0; j < 20; ++j) EXPECT_NEAR(e.p(i, j), i == j ? 0.0 : expect, 1e-14);
}

TEST(Sbm, RecoversTwoBlockModel) {
  const SbmSpec spec = sbm1_spec(100, 0.0);
  const auto p = sbm_link_matrix(spec);
  const NetworkSample s = sample_network(p, 200, Rng(99));
  const Estimate e = estimate_sbm(s, {});
  EXPECT_EQ(e.communities, 2);
  EXPECT_NEAR(e.p(0, 1), 0.6, 0.02);
  EXPECT_NEAR(e.p(0, 99), 0.3, 0.02);
  EXPECT_NEAR(e.p(98, 99), 0.6, 0.02);
  // Labels agree with the truth up to renaming.
  for (Index i = 0; i < 100; ++i) EXPECT_EQ(e.labels[i] == e.labels[0], spec.membership[i] == 0);
}

TEST(Sbm, LabelsCanonicalAndSeeded) {
  const MatrixXd mean = random_mean(60, 10, 8);
  const auto a = spectral_clustering(mean, 3, 5, 8);
  const auto b = spectral_clustering(mean, 3, 5, 8);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.front(), 0);
  int next = 0;
  for (int l : a) {
    ASSERT_LE(l, next);
    if (l == next) ++next;
  }
}

TEST(Sbm, PermutationEquivariance) {
  const SbmSpec spec = sbm1_spec(60, 0.0);
  const MatrixXd mean = sample_network(sbm_link_matrix(spec), 50, Rng(3)).mean();
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(60);
  for (int i = 0; i < 60; ++i) perm.indices()[i] = (i * 37) % 60;
  const MatrixXd pmean = perm * mean * perm.transpose();
  SbmEstimateConfig cfg;
  cfg.communities = 2;
  const MatrixXd e = estimate_sbm(mean, cfg).p.matrix();
  const MatrixXd pe = estimate_sbm(pmean, cfg).p.matrix();
  EXPECT_LT((perm * e * perm.transpose() - pe).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Estimate, DispatchAndParse) {
  EXPECT_EQ(parse_estimator("mnbs"), EstimatorKind::Mnbs);
  EXPECT_EQ(parse_estimator("avg"), EstimatorKind::Avg);
  EXPECT_EQ(parse_estimator("sbm"), EstimatorKind::Sbm);
  EXPECT_THROW(parse_estimator("knn"), InvalidInput);
  const MatrixXd mean = random_mean(30, 4, 2);
  for (auto kind : {EstimatorKind::Avg, EstimatorKind::Sbm, EstimatorKind::Mnbs}) {
    EstimatorConfig cfg;
    cfg.kind = kind;
    const Estimate e = estimate(mean, 4, cfg);
    EXPECT_EQ(e.kind, kind);
    EXPECT_EQ(e.p.order(), 30);
    EXPECT_EQ(parse_estimator(to_string(kind)), kind);
  }
}
