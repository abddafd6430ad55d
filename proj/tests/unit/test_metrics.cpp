#include <gtest/gtest.h>

#include <climits>
#include <cstdlib>

#include "netpop/metrics.hpp"

using namespace netpop;

namespace {

BoysenDistances brute_boysen(const std::vector<int>& est, const std::vector<int>& truth) {
  if (est.empty()) return {};
  auto directed = [](const std::vector<int>& from, const std::vector<int>& to) {
    int worst = 0;
    for (int b : from) {
      int best = INT_MAX;
      for (int a : to) best = std::min(best, std::abs(a - b));
      worst = std::max(worst, best);
    }
    return static_cast<double>(worst);
  };
  return {directed(truth, est), directed(est, truth)};
}

}  // namespace

TEST(Boysen, Examples) {
  const auto same = boysen_distances({25, 50}, {25, 50});
  EXPECT_EQ(*same.eps1, 0.0);
  EXPECT_EQ(*same.eps2, 0.0);
  const auto a = boysen_distances({10}, {13});
  EXPECT_EQ(*a.eps1, 3.0);
  EXPECT_EQ(*a.eps2, 3.0);
  const auto b = boysen_distances({10, 20}, {10});
  EXPECT_EQ(*b.eps1, 0.0);
  EXPECT_EQ(*b.eps2, 10.0);
}

TEST(Boysen, EmptyEstimateAndTruth) {
  const auto d = boysen_distances({}, {50});
  EXPECT_FALSE(d.eps1.has_value());
  EXPECT_FALSE(d.eps2.has_value());
  EXPECT_THROW(boysen_distances({3}, {}), DomainError);
}

TEST(Boysen, MatchesBruteForce) {
  Rng rng(404);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<int> est, truth;
    const int ne = static_cast<int>(rng.below(6));
    const int nt = 1 + static_cast<int>(rng.below(5));
    for (int i = 0; i < ne; ++i) est.push_back(1 + static_cast<int>(rng.below(200)));
    for (int i = 0; i < nt; ++i) truth.push_back(1 + static_cast<int>(rng.below(200)));
    const auto got = boysen_distances(est, truth);
    const auto want = brute_boysen(est, truth);
    ASSERT_EQ(got.eps1, want.eps1) << "trial " << trial;
    ASSERT_EQ(got.eps2, want.eps2) << "trial " << trial;
  }
}

TEST(Replicates, OrderAndWorkerIndependence) {
  const std::function<std::uint64_t(int)> task = [](int k) { return Rng(5, k)(); };
  const auto one = run_replicates<std::uint64_t>(50, task, 1);
  const auto four = run_replicates<std::uint64_t>(50, task, 4);
  EXPECT_EQ(one, four);
  for (int k = 0; k < 50; ++k) EXPECT_EQ(one[k], Rng(5, k)());
}

TEST(Replicates, PropagatesExceptions) {
  const std::function<int(int)> task = [](int k) {
    if (k == 7) throw DomainError("boom");
    return k;
  };
  EXPECT_THROW(run_replicates<int>(20, task, 3), DomainError);
}

TEST(Replicates, WorkerCountFromEnvironment) {
  ::setenv("NETPOP_WORKERS", "3", 1);
  EXPECT_EQ(worker_count(), 3);
  ::setenv("NETPOP_WORKERS", "zero", 1);
  EXPECT_GE(worker_count(), 1);
  ::unsetenv("NETPOP_WORKERS");
  EXPECT_GE(worker_count(), 1);
}

TEST(RejectionRate, DegenerateTests) {
  EXPECT_EQ(estimate_rejection_rate([](const Rng&) { return true; }, 10, 1).rate(), 1.0);
  EXPECT_EQ(estimate_rejection_rate([](const Rng&) { return false; }, 10, 1).rate(), 0.0);
}

TEST(TwoSampleScenario, NullSharesPAndAlternativePerturbs) {
  TwoSampleScenario sc;
  sc.n = 50;
  sc.m1 = sc.m2 = 3;
  const auto null = simulate_two_sample(sc, Rng(1));
  EXPECT_EQ(null.p1.matrix(), null.p2.matrix());
  sc.alternative = true;
  sc.theta = reference_theta(GraphonFamily::Graphon2, 200);
  EXPECT_EQ(sc.theta, 0.17);
  const auto alt = simulate_two_sample(sc, Rng(1));
  const MatrixXd diff = alt.p2.matrix() - alt.p1.matrix();
  int changed = 0;
  for (Index j = 0; j < 50; ++j)
    for (Index i = 0; i < j; ++i)
      if (diff(i, j) != 0.0) {
        ++changed;
        EXPECT_NEAR(diff(i, j), 0.17, 1e-12);
      }
  EXPECT_EQ(changed, 3);  // floor(log 50) = 3 nodes
  EXPECT_EQ(alt.p1.matrix(), null.p1.matrix());
}

TEST(TwoSampleScenario, ReferenceTheta) {
  EXPECT_EQ(reference_theta(GraphonFamily::Graphon1, 30), 0.05);
  EXPECT_EQ(reference_theta(GraphonFamily::Graphon1, 200), 0.02);
  EXPECT_EQ(reference_theta(GraphonFamily::Graphon2, 30), 0.2);
  EXPECT_EQ(reference_theta(GraphonFamily::Graphon2, 200), 0.17);
}

TEST(TwoSampleMethods, Names) {
  for (auto m : all_two_sample_methods()) EXPECT_EQ(parse_two_sample_method(to_string(m)), m);
  EXPECT_THROW(parse_two_sample_method("tw2"), InvalidInput);
}

TEST(ChangePointScenario, Truth) {
  ChangePointScenario sc{ChangePointScenarioKind::NoChangeGraphon3, 30, 100, 1.0};
  EXPECT_TRUE(true_changepoints(sc).empty());
  sc.kind = ChangePointScenarioKind::SingleChangeSbm1;
  EXPECT_EQ(true_changepoints(sc), std::vector<int>{50});
  sc.kind = ChangePointScenarioKind::ThreeChangeGraphon2;
  EXPECT_EQ(true_changepoints(sc), (std::vector<int>{25, 50, 75}));
}

TEST(ChangePointScenario, SeriesShapeAndDeterminism) {
  ChangePointScenario sc{ChangePointScenarioKind::ThreeChangeGraphon2, 30, 20, 0.25};
  const auto a = simulate_series(sc, Rng(4, 2));
  const auto b = simulate_series(sc, Rng(4, 2));
  ASSERT_EQ(a.length(), 20);
  EXPECT_EQ(a.order(), 30);
  EXPECT_EQ(*a.labels(), (std::vector<int>{5, 10, 15}));
  for (int t = 0; t < 20; ++t) EXPECT_TRUE(a.matrices()[t] == b.matrices()[t]);
}

TEST(ChangePointSummary, EmptyDetectorMarkers) {
  ChangePointSummary s;
  s.replicates = 10;
  s.has_truth = false;
  EXPECT_EQ(s.detect_rate(), 0.0);
  EXPECT_EQ(s.mean_found(), 0.0);
  EXPECT_FALSE(s.mean_eps1().has_value());
  EXPECT_FALSE(s.mean_eps2().has_value());
  EXPECT_FALSE(s.mean_found_efficient().has_value());
}

TEST(ChangePointBenchmark, SmallRun) {
  ChangePointScenario sc{ChangePointScenarioKind::SingleChangeSbm1, 60, 24, 1.0};
  ScanConfig mnbs, avg;
  avg.estimator.kind = EstimatorKind::Avg;
  const auto out = changepoint_benchmark(sc, {mnbs, avg}, 3, 9);
  ASSERT_EQ(out.size(), 2u);
  for (const auto& s : out) {
    EXPECT_EQ(s.replicates, 3);
    EXPECT_TRUE(s.has_truth);
    EXPECT_GE(s.detect_rate(), 0.0);
    EXPECT_LE(s.detect_rate(), 1.0);
  }
  const auto again = changepoint_benchmark(sc, {mnbs, avg}, 3, 9);
  EXPECT_EQ(again[0].total_found, out[0].total_found);
  EXPECT_EQ(again[1].eps1_sum, out[1].eps1_sum);
}
