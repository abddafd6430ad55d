#include <gtest/gtest.h>

#include "netpop/error.hpp"
#include "netpop/rng.hpp"
#include "netpop/tracy_widom.hpp"
#include "painleve_tw1.hpp"

using netpop::Tw1Table;

namespace {

const Tw1Table& table() { return Tw1Table::builtin(); }

}  // namespace

TEST(Tw1Table, GridInvariants) {
  const auto& s = table().abscissae();
  const auto& f = table().values();
  ASSERT_EQ(s.size(), f.size());
  for (std::size_t i = 1; i < s.size(); ++i) {
    ASSERT_LT(s[i - 1], s[i]);
    ASSERT_LT(f[i - 1], f[i]);
  }
  EXPECT_GT(f.front(), 0.0);
  EXPECT_LT(f.back(), 1.0);
  EXPECT_LT(table().cdf(-8.0), 1e-6);
  // The ODE oracle gives 1 - F1(6) = 1.94e-6, so 1 - 1e-6 is only passed further out.
  EXPECT_GT(f.back(), 1.0 - 1e-6);
  EXPECT_NEAR(1.0 - table().cdf(6.0), 1.94e-6, 1e-8);
  EXPECT_NE(table().provenance().find("painleve"), std::string::npos);
}

TEST(Tw1Table, CdfMonotoneAndClamped) {
  double prev = 0.0;
  for (double s = -12.0; s <= 12.0; s += 0.0137) {
    const double f = table().cdf(s);
    ASSERT_GE(f, prev);
    ASSERT_GE(f, Tw1Table::kCdfFloor);
    ASSERT_LE(f, 1.0 - Tw1Table::kCdfFloor);
    prev = f;
  }
  EXPECT_EQ(table().cdf(-1e9), Tw1Table::kCdfFloor);
  EXPECT_EQ(table().cdf(1e9), 1.0 - Tw1Table::kCdfFloor);
}

TEST(Tw1Table, QuantileRoundTrip) {
  for (int k = 1; k <= 999; ++k) {
    const double p = k / 1000.0;
    EXPECT_NEAR(table().cdf(table().quantile(p)), p, 1e-6) << "p = " << p;
  }
  EXPECT_NEAR(table().cdf(table().quantile(0.3)), 0.3, 1e-6);
}

TEST(Tw1Table, QuantileStrictlyIncreasing) {
  double prev = -1e300;
  for (int k = 1; k < 200; ++k) {
    const double q = table().quantile(k / 200.0);
    ASSERT_GT(q, prev);
    prev = q;
  }
}

TEST(Tw1Table, UpperQuantileIdentity) {
  for (double a : {0.001, 0.025, 0.05, 0.1})
    EXPECT_EQ(table().upper_quantile(a), table().quantile(1.0 - a));
}

TEST(Tw1Table, NinetyFifthPercentile) {
  // Oracle first: the commonly quoted 95% point must hold for the ODE solution.
  const netpop::oracle::PainleveTw1 oracle;
  EXPECT_NEAR(static_cast<double>(oracle.cdf(0.9793L)), 0.95, 1e-3);
  EXPECT_NEAR(table().cdf(0.9793), 0.95, 1e-3);
}

TEST(Tw1Table, MedianAgainstOracle) {
  const netpop::oracle::PainleveTw1 oracle;
  const double median = table().quantile(0.5);
  EXPECT_NEAR(static_cast<double>(oracle.cdf(static_cast<long double>(median))), 0.5, 1e-3);
}

TEST(Tw1Table, MatchesOracleAtRandomPoints) {
  netpop::Rng rng(2024, 11);
  std::vector<long double> pts;
  for (int i = 0; i < 100; ++i) pts.push_back(-7.0L + 12.0L * rng.uniform());
  const auto ref = netpop::oracle::PainleveTw1().cdf(pts);
  for (std::size_t i = 0; i < pts.size(); ++i)
    EXPECT_NEAR(table().cdf(static_cast<double>(pts[i])), static_cast<double>(ref[i]), 1e-4)
        << "s = " << static_cast<double>(pts[i]);
}

TEST(Tw1Table, QuantileDomain) {
  EXPECT_THROW(table().quantile(0.0), netpop::DomainError);
  EXPECT_THROW(table().quantile(1.0), netpop::DomainError);
  EXPECT_THROW(table().quantile(-0.5), netpop::DomainError);
  EXPECT_THROW(table().cdf(std::nan("")), netpop::DomainError);
}

TEST(Tw1Table, ExtremeQuantilesAreClampedWithFlag) {
  const auto q = table().quantile_checked(1.0 - 1e-13);
  EXPECT_TRUE(q.clamped);
  EXPECT_EQ(q.value, table().abscissae().back());
  EXPECT_FALSE(table().quantile_checked(0.5).clamped);
}

TEST(Tw1Table, TextRoundTripIsExact) {
  const Tw1Table back = Tw1Table::parse(table().to_text());
  EXPECT_EQ(back.abscissae(), table().abscissae());
  EXPECT_EQ(back.values(), table().values());
  EXPECT_EQ(back.provenance(), table().provenance());
}

TEST(Tw1Table, RejectsMalformedTables) {
  EXPECT_THROW(Tw1Table::parse("0 0.1\n1 0.05\n"), netpop::InvalidTable);
  EXPECT_THROW(Tw1Table::parse("0 0.1\n0 0.2\n"), netpop::InvalidTable);
  EXPECT_THROW(Tw1Table::parse("0 0.1\n1 1.0\n"), netpop::InvalidTable);
  EXPECT_THROW(Tw1Table::parse("0 0.1\n"), netpop::InvalidTable);
  EXPECT_THROW(Tw1Table::parse("0 0.1\n1 x\n"), netpop::Error);
  EXPECT_THROW(Tw1Table::load("/nonexistent/tw1.txt"), netpop::ParseError);
}
