#include "netpop/changepoint.hpp"

#include <cmath>
#include <deque>

#include "netpop/error.hpp"
#include "netpop/two_sample.hpp"

namespace netpop {

DynamicNetworkSeries::DynamicNetworkSeries(std::vector<AdjacencyMatrix> matrices,
                                           std::optional<std::vector<int>> labels)
    : matrices_(std::move(matrices)), labels_(std::move(labels)) {
  if (matrices_.size() < 2) throw InvalidInput("a dynamic series needs at least 2 networks");
  const Index n = matrices_.front().order();
  for (std::size_t k = 1; k < matrices_.size(); ++k)
    if (matrices_[k].order() != n)
      throw InvalidInput("network " + std::to_string(k + 1) + " has order " +
                         std::to_string(matrices_[k].order()) + ", expected " + std::to_string(n));
}

MatrixXd DynamicNetworkSeries::window_mean(int first, int last) const {
  if (first < 1 || last > length() || first > last) throw DomainError("window outside the series");
  return mean_adjacency(matrices_, static_cast<std::size_t>(first - 1), static_cast<std::size_t>(last));
}

int default_window(int m) { return static_cast<int>(std::lround(std::sqrt(static_cast<double>(m)))); }

int resolve_window(const ScanConfig& cfg, int m) {
  const int h = cfg.window ? *cfg.window : default_window(m);
  if (h < 2) throw UnsupportedConfig("window h = " + std::to_string(h) + " must be at least 2");
  if (2 * h > m)
    throw UnsupportedConfig("window h = " + std::to_string(h) + " too large for m = " +
                            std::to_string(m) + " (need 2h <= m)");
  return h;
}

double scan_statistic(const DynamicNetworkSeries& series, int t, int h,
                      const EstimatorConfig& estimator) {
  if (h < 1 || t < h || t > series.length() - h)
    throw DomainError("scan time t = " + std::to_string(t) + " outside [h, m - h]");
  const MatrixXd left = series.window_mean(t - h + 1, t);
  const MatrixXd right = series.window_mean(t + 1, t + h);
  const Estimate e1 = estimate(left, h, estimator);
  const Estimate e2 = estimate(right, h, estimator);
  return tw1_statistic(build_zhat(left, h, right, h, e1.p, e2.p));
}

std::vector<int> local_maximizers(const std::map<int, double>& values, int h) {
  std::vector<int> out;
  for (auto it = values.begin(); it != values.end(); ++it) {
    const auto [t, v] = *it;
    bool keep = true;
    for (auto lo = values.lower_bound(t - h + 1); keep && lo != it; ++lo)
      keep = lo->second < v;
    for (auto hi = std::next(it); keep && hi != values.end() && hi->first < t + h; ++hi)
      keep = hi->second <= v;
    if (keep) out.push_back(t);
  }
  return out;
}

double threshold_alpha(Index n, int h) {
  if (n < 2 || h < 1) throw DomainError("threshold alpha needs n >= 2 and h >= 1");
  return -std::expm1(std::log1p(-1.0 / static_cast<double>(n)) / (2.0 * h)) / 2.0;
}

Threshold dynamic_threshold(int h, const LinkProbabilityMatrix& p1, const LinkProbabilityMatrix& p2,
                            const Tw1Table& table, std::optional<double> alpha_override) {
  const Index n = p1.order();
  const double alpha = alpha_override ? *alpha_override : threshold_alpha(n, h);
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("threshold alpha must lie in (0, 1)");
  const auto tau = table.upper_quantile_checked(alpha);
  const double delta = largest_singular_value(build_ztilde(p1, p2, h, h).values);
  const double nd = static_cast<double>(n);
  const double second = std::cbrt(nd * nd) * (delta - 4.0) - tau.value;
  return {std::max(tau.value, second), alpha, tau.value, delta, tau.clamped};
}

ChangePointResult detect_changepoints(const DynamicNetworkSeries& series, const ScanConfig& cfg,
                                      const Tw1Table& table) {
  const int m = series.length();
  const int h = resolve_window(cfg, m);
  const Index n = series.order();

  // Window estimates by start time s (window A_s..A_{s+h-1}); T(t) pairs the
  // windows starting at t - h + 1 and t + 1, so only the last h + 1 are kept.
  using Counts = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;
  Counts counts = Counts::Zero(n, n);
  for (int k = 0; k < h; ++k) counts += series.matrices()[k].matrix().cast<int>();
  struct Window {
    MatrixXd mean;
    LinkProbabilityMatrix p;
  };
  std::deque<Window> windows;
  auto push_window = [&](int start) {
    if (start > 1) {
      counts -= series.matrices()[start - 2].matrix().cast<int>();
      counts += series.matrices()[start + h - 2].matrix().cast<int>();
    }
    MatrixXd mean = counts.cast<double>() / static_cast<double>(h);
    LinkProbabilityMatrix p = estimate(mean, h, cfg.estimator).p;
    windows.push_back({std::move(mean), std::move(p)});
    if (static_cast<int>(windows.size()) > h + 1) windows.pop_front();
  };

  std::map<int, double> values;
  for (int start = 1; start <= h + 1; ++start) push_window(start);
  for (int t = h; t <= m - h; ++t) {
    if (t > h) push_window(t + 1);
    const Window& left = windows.front();
    const Window& right = windows.back();
    values[t] = tw1_statistic(build_zhat(left.mean, h, right.mean, h, left.p, right.p));
  }

  ChangePointResult result;
  result.window = h;
  result.estimator = cfg.estimator.kind;
  const std::vector<int> maxima = local_maximizers(values, h);
  std::size_t next = 0;
  for (const auto& [t, v] : values) {
    CandidateTrace c{t, v, false, std::nullopt, false};
    if (next < maxima.size() && maxima[next] == t) {
      ++next;
      c.local_max = true;
      const LinkProbabilityMatrix p1 = estimate(series.window_mean(t - h + 1, t), h, cfg.estimator).p;
      const LinkProbabilityMatrix p2 = estimate(series.window_mean(t + 1, t + h), h, cfg.estimator).p;
      c.threshold = dynamic_threshold(h, p1, p2, table, cfg.alpha_override);
      c.detected = v > c.threshold->value;
      if (c.detected) result.estimated.push_back(t);
    }
    result.trace.push_back(c);
  }
  return result;
}

}  // namespace netpop
