#include "netpop/metrics.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "netpop/error.hpp"

namespace netpop {

BoysenDistances boysen_distances(const std::vector<int>& estimated, const std::vector<int>& truth) {
  if (truth.empty()) throw DomainError("Boysen distances need a nonempty true change-point set");
  if (estimated.empty()) return {};
  auto directed = [](const std::vector<int>& from, const std::vector<int>& to) {
    int worst = 0;
    for (int b : to) {
      int best = std::numeric_limits<int>::max();
      for (int a : from) best = std::min(best, std::abs(a - b));
      worst = std::max(worst, best);
    }
    return static_cast<double>(worst);
  };
  return {directed(estimated, truth), directed(truth, estimated)};
}

int worker_count() {
  if (const char* env = std::getenv("NETPOP_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, 1024));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string to_string(TwoSampleMethod method) {
  switch (method) {
    case TwoSampleMethod::Tw1Avg: return "tw1-avg";
    case TwoSampleMethod::Tw1Sbm: return "tw1-sbm";
    case TwoSampleMethod::Tw1Mnbs: return "tw1-mnbs";
    case TwoSampleMethod::Chi2: return "chi2";
    case TwoSampleMethod::NType: return "ntype";
  }
  return "?";
}

std::vector<TwoSampleMethod> all_two_sample_methods() {
  return {TwoSampleMethod::Tw1Mnbs, TwoSampleMethod::Tw1Avg, TwoSampleMethod::Tw1Sbm,
          TwoSampleMethod::Chi2, TwoSampleMethod::NType};
}

TwoSampleMethod parse_two_sample_method(const std::string& name) {
  for (TwoSampleMethod m : all_two_sample_methods())
    if (to_string(m) == name) return m;
  throw InvalidInput("unknown method '" + name + "' (expected tw1-avg, tw1-sbm, tw1-mnbs, chi2 or ntype)");
}

double reference_theta(GraphonFamily family, int m) {
  const bool small = m <= 30;
  switch (family) {
    case GraphonFamily::Graphon1: return small ? 0.05 : 0.02;
    case GraphonFamily::Graphon2: return small ? 0.2 : 0.17;
    default: throw InvalidInput("two-sample experiments use Graphon 1 or Graphon 2");
  }
}

TwoSampleDraw simulate_two_sample(const TwoSampleScenario& sc, const Rng& rng) {
  Rng latent_rng = rng.fork(1);
  const LinkProbabilityMatrix base =
      scale_sparsity(graphon_link_matrix({sc.family, draw_latent(sc.n, latent_rng)}), sc.rho);
  LinkProbabilityMatrix p2 = base;
  if (sc.alternative) {
    Rng subset_rng = rng.fork(2);
    const auto size = static_cast<Index>(std::floor(std::log(static_cast<double>(sc.n))));
    p2 = perturb_subset(base, random_subset(sc.n, size, subset_rng), sc.theta);
  }
  NetworkSample s1 = sample_network(base, sc.m1, rng.fork(3));
  NetworkSample s2 = sample_network(p2, sc.m2, rng.fork(4));
  return {base, std::move(p2), std::move(s1), std::move(s2)};
}

TestResult run_two_sample(TwoSampleMethod method, const NetworkSample& s1, const NetworkSample& s2,
                          double alpha, const MnbsConfig& mnbs) {
  EstimatorConfig cfg;
  cfg.mnbs = mnbs;
  switch (method) {
    case TwoSampleMethod::Tw1Avg: cfg.kind = EstimatorKind::Avg; return tw1_test(s1, s2, cfg, alpha);
    case TwoSampleMethod::Tw1Sbm: cfg.kind = EstimatorKind::Sbm; return tw1_test(s1, s2, cfg, alpha);
    case TwoSampleMethod::Tw1Mnbs: cfg.kind = EstimatorKind::Mnbs; return tw1_test(s1, s2, cfg, alpha);
    case TwoSampleMethod::Chi2: return chi2_test(s1, s2, alpha);
    case TwoSampleMethod::NType: return n_type_test(s1, s2, alpha);
  }
  throw InvalidInput("unknown method");
}

std::vector<RateEstimate> estimate_rejection_rates(const TwoSampleScenario& scenario,
                                                   const std::vector<TwoSampleMethod>& methods,
                                                   double alpha, int replicates, std::uint64_t seed,
                                                   const MnbsConfig& mnbs) {
  if (replicates < 1) throw InvalidInput("need at least one replicate");
  const auto decisions = run_replicates<std::vector<char>>(replicates, [&](int k) {
    const TwoSampleDraw draw = simulate_two_sample(scenario, Rng(seed, static_cast<std::uint64_t>(k)));
    std::vector<char> out;
    for (TwoSampleMethod m : methods) out.push_back(run_two_sample(m, draw.s1, draw.s2, alpha, mnbs).reject);
    return out;
  });
  std::vector<RateEstimate> rates(methods.size(), RateEstimate{0, replicates});
  for (const auto& d : decisions)
    for (std::size_t i = 0; i < d.size(); ++i) rates[i].rejections += d[i];
  return rates;
}

RateEstimate estimate_rejection_rate(const std::function<bool(const Rng&)>& test, int replicates,
                                     std::uint64_t seed) {
  if (replicates < 1) throw InvalidInput("need at least one replicate");
  const auto decisions = run_replicates<char>(
      replicates, [&](int k) -> char { return test(Rng(seed, static_cast<std::uint64_t>(k))); });
  RateEstimate r{0, replicates};
  for (char d : decisions) r.rejections += d;
  return r;
}

std::string to_string(ChangePointScenarioKind kind) {
  switch (kind) {
    case ChangePointScenarioKind::NoChangeGraphon3: return "no-cp-graphon3";
    case ChangePointScenarioKind::NoChangeSbm1: return "no-cp-sbm1";
    case ChangePointScenarioKind::SingleChangeSbm1: return "single-cp-sbm1";
    case ChangePointScenarioKind::ThreeChangeGraphon2: return "three-cp-graphon2";
  }
  return "?";
}

ChangePointScenarioKind parse_changepoint_scenario(const std::string& name) {
  for (auto k : {ChangePointScenarioKind::NoChangeGraphon3, ChangePointScenarioKind::NoChangeSbm1,
                 ChangePointScenarioKind::SingleChangeSbm1, ChangePointScenarioKind::ThreeChangeGraphon2})
    if (to_string(k) == name) return k;
  throw InvalidInput("unknown change-point scenario '" + name + "'");
}

std::vector<int> true_changepoints(const ChangePointScenario& sc) {
  switch (sc.kind) {
    case ChangePointScenarioKind::NoChangeGraphon3:
    case ChangePointScenarioKind::NoChangeSbm1: return {};
    case ChangePointScenarioKind::SingleChangeSbm1: return {sc.m / 2};
    case ChangePointScenarioKind::ThreeChangeGraphon2: return {sc.m / 4, sc.m / 2, 3 * sc.m / 4};
  }
  return {};
}

DynamicNetworkSeries simulate_series(const ChangePointScenario& sc, const Rng& rng) {
  if (sc.m < 2) throw InvalidInput("series length must be >= 2");
  // One link probability matrix per segment; segment k covers times
  // (bounds[k-1], bounds[k]].
  std::vector<LinkProbabilityMatrix> segments;
  Rng model_rng = rng.fork(1);
  switch (sc.kind) {
    case ChangePointScenarioKind::NoChangeGraphon3:
      segments.push_back(graphon_link_matrix({GraphonFamily::Graphon3, draw_latent(sc.n, model_rng)}));
      break;
    case ChangePointScenarioKind::NoChangeSbm1:
      segments.push_back(sbm_link_matrix(sbm1_spec(sc.n, 0.0)));
      break;
    case ChangePointScenarioKind::SingleChangeSbm1:
      segments.push_back(sbm_link_matrix(sbm1_spec(sc.n, 0.0)));
      segments.push_back(sbm_link_matrix(sbm1_spec(sc.n, -std::pow(static_cast<double>(sc.m), -0.25))));
      break;
    case ChangePointScenarioKind::ThreeChangeGraphon2: {
      const LinkProbabilityMatrix p1 =
          graphon_link_matrix({GraphonFamily::Graphon2, draw_latent(sc.n, model_rng)});
      const Index third = sc.n / 3;
      const std::vector<Index> nodes = random_subset(sc.n, 2 * third, model_rng);
      const std::vector<Index> m1(nodes.begin(), nodes.begin() + third);
      const std::vector<Index> m2(nodes.begin() + third, nodes.end());
      segments.push_back(p1);
      segments.push_back(apply_change(segments.back(), ChangeKind::Switch, m1, m2, model_rng));
      segments.push_back(apply_change(segments.back(), ChangeKind::Merge, m1, m2, model_rng));
      segments.push_back(apply_change(segments.back(), ChangeKind::Regenerate, m1, m2, model_rng));
      break;
    }
  }
  for (auto& p : segments) p = scale_sparsity(p, sc.rho);

  std::vector<int> truth = true_changepoints(sc);
  std::vector<int> bounds = truth;
  bounds.push_back(sc.m);
  const Rng sampler = rng.fork(2);
  std::vector<AdjacencyMatrix> series;
  series.reserve(static_cast<std::size_t>(sc.m));
  std::size_t segment = 0;
  for (int t = 1; t <= sc.m; ++t) {
    while (t > bounds[segment]) ++segment;
    Rng stream = sampler.fork(static_cast<std::uint64_t>(t));
    series.push_back(sample_adjacency(segments[segment], stream));
  }
  return DynamicNetworkSeries(std::move(series), std::move(truth));
}

namespace {

std::optional<double> ratio(double num, int den) {
  if (den == 0) return std::nullopt;
  return num / den;
}

}  // namespace

std::optional<double> ChangePointSummary::mean_found_efficient() const {
  return ratio(static_cast<double>(total_found), detections);
}
std::optional<double> ChangePointSummary::mean_eps1() const {
  return has_truth ? ratio(eps1_sum, detections) : std::nullopt;
}
std::optional<double> ChangePointSummary::mean_eps2() const {
  return has_truth ? ratio(eps2_sum, detections) : std::nullopt;
}

std::vector<ChangePointSummary> changepoint_benchmark(const ChangePointScenario& scenario,
                                                      const std::vector<ScanConfig>& methods,
                                                      int replicates, std::uint64_t seed) {
  if (replicates < 1) throw InvalidInput("need at least one replicate");
  using Found = std::vector<std::vector<int>>;
  const auto runs = run_replicates<Found>(replicates, [&](int k) {
    const DynamicNetworkSeries series = simulate_series(scenario, Rng(seed, static_cast<std::uint64_t>(k)));
    Found found;
    for (const ScanConfig& cfg : methods) found.push_back(detect_changepoints(series, cfg).estimated);
    return found;
  });
  const std::vector<int> truth = true_changepoints(scenario);
  std::vector<ChangePointSummary> out(methods.size());
  for (std::size_t i = 0; i < methods.size(); ++i) {
    ChangePointSummary& s = out[i];
    s.replicates = replicates;
    s.has_truth = !truth.empty();
    // Runs are folded in index order, so the floating sums are reproducible.
    for (const Found& run : runs) {
      const auto& est = run[i];
      const auto size = static_cast<long long>(est.size());
      s.total_found += size;
      s.total_found_sq += size * size;
      if (est.empty()) continue;
      ++s.detections;
      if (s.has_truth) {
        const BoysenDistances d = boysen_distances(est, truth);
        s.eps1_sum += *d.eps1;
        s.eps2_sum += *d.eps2;
        s.eps1_sq_sum += *d.eps1 * *d.eps1;
        s.eps2_sq_sum += *d.eps2 * *d.eps2;
      }
    }
  }
  return out;
}

}  // namespace netpop
