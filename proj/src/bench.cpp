#include "netpop/bench.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "netpop/error.hpp"

namespace netpop {

namespace {

enum class View { Rates, MeanFound, DetectRate, Boysen };

struct Definition {
  std::string id;
  std::string title;
  bool two_sample;
  GraphonFamily family;                 // two-sample grids
  ChangePointScenarioKind scenario;     // change-point grids
  View view;
  int reference_replicates;
};

const std::vector<Definition>& definitions() {
  using K = ChangePointScenarioKind;
  static const std::vector<Definition> defs = {
      {"fig1", "ASL and AP of two-sample tests, Graphon 1", true, GraphonFamily::Graphon1, K::NoChangeGraphon3, View::Rates, 1000},
      {"fig2", "ASL and AP of two-sample tests, Graphon 2", true, GraphonFamily::Graphon2, K::NoChangeGraphon3, View::Rates, 1000},
      {"tab1", "Average estimated change-point number, no change (Graphon 3)", false, GraphonFamily::Graphon3, K::NoChangeGraphon3, View::MeanFound, 100},
      {"tab2", "Average estimated change-point number, no change (SBM 1)", false, GraphonFamily::Graphon3, K::NoChangeSbm1, View::MeanFound, 100},
      {"tab3", "Average estimated change-point number, single change (SBM 1)", false, GraphonFamily::Graphon3, K::SingleChangeSbm1, View::MeanFound, 100},
      {"tab4", "Efficient detect rate, single change (SBM 1)", false, GraphonFamily::Graphon3, K::SingleChangeSbm1, View::DetectRate, 100},
      {"tab5", "Average Boysen distances over efficient detections, single change (SBM 1)", false, GraphonFamily::Graphon3, K::SingleChangeSbm1, View::Boysen, 100},
      {"tab6", "Average estimated change-point number, three changes (Graphon 2)", false, GraphonFamily::Graphon3, K::ThreeChangeGraphon2, View::MeanFound, 100},
      {"tab7", "Efficient detect rate, three changes (Graphon 2)", false, GraphonFamily::Graphon3, K::ThreeChangeGraphon2, View::DetectRate, 100},
      {"tab8", "Average Boysen distances over efficient detections, three changes (Graphon 2)", false, GraphonFamily::Graphon3, K::ThreeChangeGraphon2, View::Boysen, 100},
  };
  return defs;
}

const Definition& find_definition(const std::string& id) {
  for (const auto& d : definitions())
    if (d.id == id) return d;
  std::string known;
  for (const auto& d : definitions()) known += (known.empty() ? "" : ", ") + d.id;
  throw InvalidInput("unknown benchmark id '" + id + "' (known: " + known + ")");
}

const std::vector<std::string> kChangePointMethods = {"CP-TWAVG", "CP-TWSBM", "CP-TWMNBS"};
const std::vector<std::string> kExternalDetectors = {"CP-GRA", "CP-DMNBS"};

Index scaled_n(Index n, double scale) {
  return std::max<Index>(10, static_cast<Index>(std::lround(static_cast<double>(n) * scale)));
}

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string with_se(std::optional<double> v, std::optional<double> se) {
  if (!v) return "-";
  return fixed(*v) + " (" + fixed(se.value_or(0.0)) + ")";
}

double rate_se(double p, int r) { return std::sqrt(p * (1.0 - p) / r); }

std::optional<double> mean_se(double sum, double sq_sum, int count) {
  if (count < 2) return 0.0;
  const double mean = sum / count;
  const double var = std::max(0.0, (sq_sum - count * mean * mean) / (count - 1));
  return std::sqrt(var / count);
}

std::string rho_text(double rho) { return rho == 1.0 ? "1" : fixed(rho); }

std::string align(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (width.size() <= c) width.push_back(0);
      width[c] = std::max(width[c], row[c].size());
    }
  std::ostringstream os;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += "  ";
      line += row[c] + std::string(width[c] - row[c].size(), ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << '\n';
  }
  return os.str();
}

}  // namespace

std::vector<std::string> bench_ids() {
  std::vector<std::string> ids;
  for (const auto& d : definitions()) ids.push_back(d.id);
  return ids;
}

BenchmarkReport run_benchmark(const BenchRequest& req) {
  const Definition& def = find_definition(req.id);
  if (!(req.scale > 0.0)) throw InvalidInput("scale must be positive");
  if (req.replicates && *req.replicates < 1) throw InvalidInput("replicates must be >= 1");

  BenchmarkReport rep;
  rep.id = def.id;
  rep.title = def.title;
  rep.scale = req.scale;
  rep.reference_replicates = def.reference_replicates;
  rep.replicates = req.replicates ? *req.replicates
                                  : std::max(1, static_cast<int>(std::lround(def.reference_replicates * req.scale)));
  rep.seed = req.seed;
  rep.alpha = req.alpha;
  rep.q_constant = req.q_constant;
  if (rep.replicates == 1)
    rep.warnings.push_back("only 1 replicate: every rate is 0 or 1 and standard errors are meaningless");

  MnbsConfig mnbs;
  mnbs.constant = req.q_constant;
  std::uint64_t cell = 0;

  if (def.two_sample) {
    const auto methods = all_two_sample_methods();
    for (auto m : methods) rep.methods.push_back(to_string(m));
    for (int m : {30, 200})
      for (bool alternative : {false, true})
        for (Index n = 100; n <= 1000; n += 100) {
          TwoSampleScenario sc;
          sc.family = def.family;
          sc.n = scaled_n(n, req.scale);
          sc.m1 = sc.m2 = m;
          sc.alternative = alternative;
          sc.theta = alternative ? reference_theta(def.family, m) : 0.0;
          const std::uint64_t seed = mix_stream(req.seed, cell++);
          rep.two_sample.push_back(
              {sc, n, seed, estimate_rejection_rates(sc, methods, req.alpha, rep.replicates, seed, mnbs)});
        }
    return rep;
  }

  rep.methods = kChangePointMethods;
  std::vector<ScanConfig> configs(3);
  configs[0].estimator.kind = EstimatorKind::Avg;
  configs[1].estimator.kind = EstimatorKind::Sbm;
  configs[2].estimator.kind = EstimatorKind::Mnbs;
  for (auto& c : configs) c.estimator.mnbs = mnbs;
  for (int m : {100, 200})
    for (Index n : {100, 200, 300})
      for (double rho : {1.0, 0.25}) {
        ChangePointScenario sc{def.scenario, scaled_n(n, req.scale), m, rho};
        const std::uint64_t seed = mix_stream(req.seed, cell++);
        rep.changepoint.push_back({sc, n, seed, changepoint_benchmark(sc, configs, rep.replicates, seed)});
      }
  return rep;
}

std::string render_table(const BenchmarkReport& rep) {
  const Definition& def = find_definition(rep.id);
  std::ostringstream os;
  os << rep.title << "  [" << rep.id << ", R = " << rep.replicates << " (reference "
     << rep.reference_replicates << "), scale " << fixed(rep.scale) << ", seed " << rep.seed << "]\n";
  std::vector<std::vector<std::string>> rows;

  if (def.two_sample) {
    std::vector<std::string> header = {"m", "n", "n_ref", "hypothesis"};
    for (const auto& m : rep.methods) header.push_back(m);
    rows.push_back(header);
    for (const auto& c : rep.two_sample) {
      std::vector<std::string> row = {std::to_string(c.scenario.m1), std::to_string(c.scenario.n),
                                      std::to_string(c.reference_n),
                                      c.scenario.alternative ? "AP" : "ASL"};
      for (const auto& r : c.rates) row.push_back(with_se(r.rate(), rate_se(r.rate(), r.replicates)));
      rows.push_back(row);
    }
  } else {
    std::vector<std::string> header = {"m", "n", "n_ref", "rho"};
    if (def.view == View::Boysen) header.push_back("");
    for (const auto& m : rep.methods) header.push_back(m);
    for (const auto& m : kExternalDetectors) header.push_back(m);
    rows.push_back(header);
    for (const auto& c : rep.changepoint) {
      std::vector<std::string> lead = {std::to_string(c.scenario.m), std::to_string(c.scenario.n),
                                       std::to_string(c.reference_n), rho_text(c.scenario.rho)};
      auto finish = [&](std::vector<std::string> row) {
        for (std::size_t k = 0; k < kExternalDetectors.size(); ++k) row.push_back("n/a");
        rows.push_back(std::move(row));
      };
      switch (def.view) {
        case View::MeanFound: {
          auto row = lead;
          for (const auto& s : c.summaries)
            row.push_back(with_se(s.mean_found(), mean_se(static_cast<double>(s.total_found),
                                                          static_cast<double>(s.total_found_sq), s.replicates)));
          finish(row);
          break;
        }
        case View::DetectRate: {
          auto row = lead;
          for (const auto& s : c.summaries) row.push_back(with_se(s.detect_rate(), rate_se(s.detect_rate(), s.replicates)));
          finish(row);
          break;
        }
        case View::Boysen: {
          auto row1 = lead, row2 = std::vector<std::string>(lead.size(), "");
          row1.push_back("eps1");
          row2.push_back("eps2");
          for (const auto& s : c.summaries) {
            row1.push_back(with_se(s.mean_eps1(), mean_se(s.eps1_sum, s.eps1_sq_sum, s.detections)));
            row2.push_back(with_se(s.mean_eps2(), mean_se(s.eps2_sum, s.eps2_sq_sum, s.detections)));
          }
          finish(row1);
          finish(row2);
          break;
        }
        case View::Rates: break;
      }
    }
  }
  os << align(rows);
  if (def.view == View::Boysen) os << "\"-\": no efficient detection in any run.\n";
  if (!def.two_sample)
    os << "CP-GRA and CP-DMNBS are external detectors and are not run (n/a).\n";
  for (const auto& w : rep.warnings) os << "warning: " << w << '\n';
  return os.str();
}

}  // namespace netpop
