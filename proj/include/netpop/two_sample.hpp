#pragma once

#include <map>
#include <optional>
#include <string>

#include "netpop/estimators.hpp"
#include "netpop/graph_model.hpp"
#include "netpop/tracy_widom.hpp"

namespace netpop {

/// P-hat values are clamped into [kVarianceFloor, 1 - kVarianceFloor] inside
/// the variance denominators.
inline constexpr double kVarianceFloor = 1e-6;

/// Entrywise standardised difference of two populations, symmetric with
/// zero diagonal. `floor_hits` counts P-hat entries (per unordered pair and
/// per population) moved by the variance floor.
struct StandardizedMatrix {
  MatrixXd values;
  Index floor_hits = 0;

  Index order() const { return values.rows(); }
};

/// Z-hat: (A-bar_1 - A-bar_2) / sqrt((n - 1) [P1 (1 - P1) / m1 + P2 (1 - P2) / m2]).
/// With the true P plugged in this is the oracle standardisation Z.
StandardizedMatrix build_zhat(const MatrixXd& mean1, int m1, const MatrixXd& mean2, int m2,
                              const LinkProbabilityMatrix& p1, const LinkProbabilityMatrix& p2);
StandardizedMatrix build_zhat(const NetworkSample& s1, const NetworkSample& s2,
                              const LinkProbabilityMatrix& p1, const LinkProbabilityMatrix& p2);

/// Z-tilde: as Z-hat with P1 - P2 in the numerator. With estimates plugged
/// in and m1 = m2 = h this is V1(t, h) of the change-point threshold.
StandardizedMatrix build_ztilde(const LinkProbabilityMatrix& p1, const LinkProbabilityMatrix& p2,
                                int m1, int m2);

/// n^{2/3} (sigma_1(Z) - 2).
double tw1_statistic(const MatrixXd& z);
inline double tw1_statistic(const StandardizedMatrix& z) { return tw1_statistic(z.values); }

enum class TestFamily { Tw1, ChiSq, NType };
std::string to_string(TestFamily family);

enum class Sidedness { TwoSided, Upper };

struct TestResult {
  TestFamily family = TestFamily::Tw1;
  double statistic = 0.0;
  std::optional<double> lower_threshold;  ///< reject below (chi2 two-sided, N-type)
  double upper_threshold = 0.0;           ///< reject above (closed for TW1/N-type)
  double alpha = 0.05;
  bool reject = false;
  Sidedness sidedness = Sidedness::TwoSided;  ///< chi2 only
  double df = 0.0;                            ///< chi2 only
  std::string estimator;                      ///< TW1 only
  std::map<std::string, double> diagnostics;
};

/// Recomputes the decision from (family, statistic, alpha[, df, sidedness]).
bool decide(const TestResult& result, const Tw1Table& table = Tw1Table::builtin());

/// Rejects iff T >= tau_{alpha/2}, the upper alpha/2 point of TW1.
TestResult tw1_test(const NetworkSample& s1, const NetworkSample& s2, const EstimatorConfig& cfg,
                    double alpha, const Tw1Table& table = Tw1Table::builtin());

/// Sum over i < j of (A-bar_1 - A-bar_2)^2 / (S1 + S2), S_u the replicate
/// variance of the mean. Pairs with S1 + S2 = 0 are left out and the
/// degrees of freedom count the pairs kept. Needs m1 = m2 >= 2.
TestResult chi2_test(const NetworkSample& s1, const NetworkSample& s2, double alpha,
                     Sidedness sidedness = Sidedness::TwoSided);

/// Split-sample statistic: replicates 1..floor(m/2) against the rest.
/// Rejects iff |T| >= z_{1 - alpha/2}; a zero denominator gives T = 0 and
/// diagnostics["zero_denominator"] = 1. Needs m1 = m2 >= 2.
TestResult n_type_test(const NetworkSample& s1, const NetworkSample& s2, double alpha);

}  // namespace netpop
