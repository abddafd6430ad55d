#include "netpop/two_sample.hpp"

#include <cmath>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "netpop/error.hpp"

namespace netpop {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

struct FlooredVariance {
  double value;
  int hits;
};

FlooredVariance floored_variance(double p) {
  const double c = std::clamp(p, kVarianceFloor, 1.0 - kVarianceFloor);
  return {c * (1.0 - c), c != p ? 1 : 0};
}

template <typename Numerator>
StandardizedMatrix standardize(Index n, Numerator numerator, const LinkProbabilityMatrix& p1,
                               const LinkProbabilityMatrix& p2, int m1, int m2) {
  if (m1 < 1 || m2 < 1) throw InvalidInput("sample sizes must be >= 1");
  if (p1.order() != n || p2.order() != n) throw InvalidInput("order mismatch between inputs");
  StandardizedMatrix z{MatrixXd::Zero(n, n), 0};
  const double scale = static_cast<double>(n - 1);
  for (Index j = 1; j < n; ++j) {
    for (Index i = 0; i < j; ++i) {
      const auto v1 = floored_variance(p1(i, j));
      const auto v2 = floored_variance(p2(i, j));
      z.floor_hits += v1.hits + v2.hits;
      const double value = numerator(i, j) / std::sqrt(scale * (v1.value / m1 + v2.value / m2));
      z.values(i, j) = value;
      z.values(j, i) = value;
    }
  }
  return z;
}

}  // namespace

StandardizedMatrix build_zhat(const MatrixXd& mean1, int m1, const MatrixXd& mean2, int m2,
                              const LinkProbabilityMatrix& p1, const LinkProbabilityMatrix& p2) {
  const Index n = mean1.rows();
  if (mean1.cols() != n || mean2.rows() != n || mean2.cols() != n)
    throw InvalidInput("order mismatch between inputs");
  return standardize(
      n, [&](Index i, Index j) { return mean1(i, j) - mean2(i, j); }, p1, p2, m1, m2);
}

StandardizedMatrix build_zhat(const NetworkSample& s1, const NetworkSample& s2,
                              const LinkProbabilityMatrix& p1, const LinkProbabilityMatrix& p2) {
  return build_zhat(s1.mean(), s1.size(), s2.mean(), s2.size(), p1, p2);
}

StandardizedMatrix build_ztilde(const LinkProbabilityMatrix& p1, const LinkProbabilityMatrix& p2,
                                int m1, int m2) {
  return standardize(
      p1.order(), [&](Index i, Index j) { return p1(i, j) - p2(i, j); }, p1, p2, m1, m2);
}

double tw1_statistic(const MatrixXd& z) {
  const double n = static_cast<double>(z.rows());
  return std::cbrt(n * n) * (largest_singular_value(z) - 2.0);
}

std::string to_string(TestFamily family) {
  switch (family) {
    case TestFamily::Tw1: return "tw1";
    case TestFamily::ChiSq: return "chi2";
    case TestFamily::NType: return "ntype";
  }
  return "?";
}

namespace {

double normal_upper(double alpha) {
  return boost::math::quantile(boost::math::complement(boost::math::normal(), alpha));
}

struct Chi2Region {
  std::optional<double> lower;
  double upper;
};

Chi2Region chi2_region(double df, double alpha, Sidedness sidedness) {
  const boost::math::chi_squared dist(df);
  if (sidedness == Sidedness::Upper)
    return {std::nullopt, boost::math::quantile(boost::math::complement(dist, alpha))};
  return {boost::math::quantile(dist, alpha / 2.0),
          boost::math::quantile(boost::math::complement(dist, alpha / 2.0))};
}

bool chi2_reject(double t, double df, double alpha, Sidedness sidedness) {
  if (df <= 0.0) return false;
  const Chi2Region r = chi2_region(df, alpha, sidedness);
  return t > r.upper || (r.lower && t < *r.lower);
}

void require_equal_sizes(const NetworkSample& s1, const NetworkSample& s2, const char* what) {
  if (s1.order() != s2.order()) throw InvalidInput("samples have different orders");
  if (s1.size() != s2.size())
    throw UnsupportedConfig(std::string(what) + " needs equal sample sizes (got m1 = " +
                            std::to_string(s1.size()) + ", m2 = " + std::to_string(s2.size()) +
                            "); use a TW1 test for unequal sizes");
  if (s1.size() < 2) throw UnsupportedConfig(std::string(what) + " needs m >= 2");
}

}  // namespace

bool decide(const TestResult& r, const Tw1Table& table) {
  check_alpha(r.alpha);
  switch (r.family) {
    case TestFamily::Tw1: return r.statistic >= table.upper_quantile(r.alpha / 2.0);
    case TestFamily::ChiSq: return chi2_reject(r.statistic, r.df, r.alpha, r.sidedness);
    case TestFamily::NType: return std::abs(r.statistic) >= normal_upper(r.alpha / 2.0);
  }
  return false;
}

TestResult tw1_test(const NetworkSample& s1, const NetworkSample& s2, const EstimatorConfig& cfg,
                    double alpha, const Tw1Table& table) {
  check_alpha(alpha);
  if (s1.order() != s2.order()) throw InvalidInput("samples have different orders");
  const Estimate e1 = estimate(s1.mean(), s1.size(), cfg);
  const Estimate e2 = estimate(s2.mean(), s2.size(), cfg);
  const StandardizedMatrix z = build_zhat(s1, s2, e1.p, e2.p);
  const auto tau = table.upper_quantile_checked(alpha / 2.0);

  TestResult r;
  r.family = TestFamily::Tw1;
  r.statistic = tw1_statistic(z);
  r.upper_threshold = tau.value;
  r.alpha = alpha;
  r.reject = r.statistic >= tau.value;
  r.estimator = to_string(cfg.kind);
  r.diagnostics["floor_hits"] = static_cast<double>(z.floor_hits);
  r.diagnostics["quantile_clamped"] = tau.clamped ? 1.0 : 0.0;
  r.diagnostics["m1"] = s1.size();
  r.diagnostics["m2"] = s2.size();
  if (cfg.kind == EstimatorKind::Mnbs) {
    r.diagnostics["mnbs_q1"] = e1.quantile;
    r.diagnostics["mnbs_q2"] = e2.quantile;
  } else if (cfg.kind == EstimatorKind::Sbm) {
    r.diagnostics["sbm_k1"] = e1.communities;
    r.diagnostics["sbm_k2"] = e2.communities;
  }
  return r;
}

TestResult chi2_test(const NetworkSample& s1, const NetworkSample& s2, double alpha,
                     Sidedness sidedness) {
  check_alpha(alpha);
  require_equal_sizes(s1, s2, "the chi2-type test");
  const Index n = s1.order();
  const double m = s1.size();
  const MatrixXd& a1 = s1.mean();
  const MatrixXd& a2 = s2.mean();
  double t = 0.0;
  Index kept = 0, excluded = 0;
  for (Index j = 1; j < n; ++j) {
    for (Index i = 0; i < j; ++i) {
      // For binary replicates sum_k (A^(k) - A-bar)^2 = m A-bar (1 - A-bar).
      const double var = (a1(i, j) * (1.0 - a1(i, j)) + a2(i, j) * (1.0 - a2(i, j))) / (m - 1.0);
      if (var == 0.0) {
        ++excluded;
        continue;
      }
      const double d = a1(i, j) - a2(i, j);
      t += d * d / var;
      ++kept;
    }
  }
  TestResult r;
  r.family = TestFamily::ChiSq;
  r.statistic = t;
  r.alpha = alpha;
  r.sidedness = sidedness;
  r.df = static_cast<double>(kept);
  if (kept > 0) {
    const Chi2Region region = chi2_region(r.df, alpha, sidedness);
    r.lower_threshold = region.lower;
    r.upper_threshold = region.upper;
  } else {
    r.upper_threshold = std::numeric_limits<double>::infinity();
  }
  r.reject = chi2_reject(t, r.df, alpha, sidedness);
  r.diagnostics["excluded_pairs"] = static_cast<double>(excluded);
  r.diagnostics["df"] = r.df;
  return r;
}

TestResult n_type_test(const NetworkSample& s1, const NetworkSample& s2, double alpha) {
  check_alpha(alpha);
  require_equal_sizes(s1, s2, "the N-type test");
  const Index n = s1.order();
  const int m = s1.size();
  const int half = m / 2;
  using Counts = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;
  auto sum = [&](const NetworkSample& s, int first, int last) {
    Counts c = Counts::Zero(n, n);
    for (int k = first; k < last; ++k) c += s.matrices()[k].matrix().cast<int>();
    return c;
  };
  const Counts x1 = sum(s1, 0, half), y1 = sum(s1, half, m);
  const Counts x2 = sum(s2, 0, half), y2 = sum(s2, half, m);
  double num = 0.0, den = 0.0;
  for (Index j = 1; j < n; ++j) {
    for (Index i = 0; i < j; ++i) {
      num += static_cast<double>(x1(i, j) - x2(i, j)) * static_cast<double>(y1(i, j) - y2(i, j));
      den += static_cast<double>(x1(i, j) + x2(i, j)) * static_cast<double>(y1(i, j) + y2(i, j));
    }
  }
  TestResult r;
  r.family = TestFamily::NType;
  r.alpha = alpha;
  r.statistic = den > 0.0 ? num / std::sqrt(den) : 0.0;
  const double z = normal_upper(alpha / 2.0);
  r.lower_threshold = -z;
  r.upper_threshold = z;
  r.reject = std::abs(r.statistic) >= z;
  r.diagnostics["zero_denominator"] = den > 0.0 ? 0.0 : 1.0;
  r.diagnostics["first_half"] = half;
  r.diagnostics["second_half"] = m - half;
  return r;
}

}  // namespace netpop
