#include "netpop/cli.hpp"

#include <cmath>
#include <cstdio>
#include <optional>

#include <CLI11.hpp>

#include "netpop/bench.hpp"
#include "netpop/error.hpp"
#include "netpop/io.hpp"
#include "netpop/version.hpp"

namespace netpop {

namespace {

namespace fs = std::filesystem;
using io::Json;

struct Common {
  std::uint64_t seed = 1;
  double alpha = 0.05;
  std::string estimator = "mnbs";
  std::optional<int> h;
  double q_const = 3.0;
  double scale = 1.0;
  std::optional<int> replicates;
  std::string out;
};

std::string number(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string join(const std::vector<int>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + "}";
}

io::ResultRecord make_record(const std::string& kind, const std::vector<std::string>& args,
                             const Common& c) {
  io::ResultRecord r;
  r.kind = kind;
  r.invocation = args;
  r.tool_version = kVersion;
  r.seeds = Json{{"seed", c.seed}};
  return r;
}

// ---------------------------------------------------------------------------

struct SimulateOptions {
  std::string preset;
  std::string model;
  Index n = 0;
  int m = 0;
  double rho = 1.0;
  std::optional<double> theta;
};

int cmd_simulate(const SimulateOptions& o, const Common& c, std::ostream& out) {
  const fs::path dir = c.out;
  const Rng rng(c.seed, 0);
  Json scenario{{"preset", o.preset}, {"seed", c.seed}, {"rho", o.rho}};
  if (o.preset == "two-sample-null" || o.preset == "two-sample-alt") {
    TwoSampleScenario sc;
    const std::string model = o.model.empty() ? "graphon2" : o.model;
    if (model == "graphon1") sc.family = GraphonFamily::Graphon1;
    else if (model == "graphon2") sc.family = GraphonFamily::Graphon2;
    else throw UnsupportedConfig("two-sample presets use --model graphon1 or graphon2");
    sc.n = o.n ? o.n : 300;
    sc.m1 = sc.m2 = o.m ? o.m : 200;
    sc.rho = o.rho;
    sc.alternative = o.preset == "two-sample-alt";
    if (sc.alternative) sc.theta = o.theta ? *o.theta : reference_theta(sc.family, sc.m1);
    const TwoSampleDraw draw = simulate_two_sample(sc, rng);
    io::write_sample_dir(dir / "sample1", draw.s1);
    io::write_sample_dir(dir / "sample2", draw.s2);
    scenario["model"] = model;
    scenario["n"] = sc.n;
    scenario["m"] = sc.m1;
    scenario["theta"] = sc.theta;
    out << "wrote " << sc.m1 << " + " << sc.m2 << " networks (n = " << sc.n << ") to "
        << (dir / "sample1").string() << " and " << (dir / "sample2").string() << "\n";
  } else {
    ChangePointScenario sc;
    std::string model = o.model;
    if (o.preset == "no-cp") {
      if (model.empty()) model = "graphon3";
      if (model == "graphon3") sc.kind = ChangePointScenarioKind::NoChangeGraphon3;
      else if (model == "sbm1") sc.kind = ChangePointScenarioKind::NoChangeSbm1;
      else throw UnsupportedConfig("no-cp uses --model graphon3 or sbm1");
    } else if (o.preset == "single-cp") {
      if (model.empty()) model = "sbm1";
      if (model != "sbm1") throw UnsupportedConfig("single-cp uses --model sbm1");
      sc.kind = ChangePointScenarioKind::SingleChangeSbm1;
    } else {
      if (model.empty()) model = "graphon2";
      if (model != "graphon2") throw UnsupportedConfig("three-cp uses --model graphon2");
      sc.kind = ChangePointScenarioKind::ThreeChangeGraphon2;
    }
    sc.n = o.n ? o.n : (sc.kind == ChangePointScenarioKind::ThreeChangeGraphon2 ? 100 : 200);
    sc.m = o.m ? o.m : 100;
    sc.rho = o.rho;
    const DynamicNetworkSeries series = simulate_series(sc, rng);
    const fs::path manifest = io::write_series(dir, series);
    scenario["model"] = model;
    scenario["n"] = sc.n;
    scenario["m"] = sc.m;
    scenario["labels"] = *series.labels();
    out << "wrote a series of " << sc.m << " networks (n = " << sc.n << ") with change-points "
        << join(*series.labels()) << "; manifest " << manifest.string() << "\n";
  }
  std::ofstream(dir / "scenario.json", std::ios::binary) << scenario.dump(2) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct TestOptions {
  std::string sample1, sample2;
  std::string method = "tw1-mnbs";
  bool one_sided = false;
};

int cmd_test(const TestOptions& o, const Common& c, const std::vector<std::string>& args,
             std::ostream& out) {
  const NetworkSample s1 = io::load_sample_dir(o.sample1);
  const NetworkSample s2 = io::load_sample_dir(o.sample2);
  const TwoSampleMethod method = parse_two_sample_method(o.method);
  MnbsConfig mnbs;
  mnbs.constant = c.q_const;
  TestResult r = method == TwoSampleMethod::Chi2
                     ? chi2_test(s1, s2, c.alpha, o.one_sided ? Sidedness::Upper : Sidedness::TwoSided)
                     : run_two_sample(method, s1, s2, c.alpha, mnbs);

  out << "method     " << o.method << "  (n = " << s1.order() << ", m1 = " << s1.size()
      << ", m2 = " << s2.size() << ")\n";
  out << "statistic  " << number(r.statistic) << "\n";
  switch (r.family) {
    case TestFamily::Tw1:
      out << "threshold  tau_{alpha/2} = " << number(r.upper_threshold) << " (reject if T >= threshold)\n";
      out << "floor hits " << r.diagnostics["floor_hits"] << "\n";
      break;
    case TestFamily::ChiSq:
      out << "df         " << r.df << " (" << r.diagnostics["excluded_pairs"] << " pairs excluded)\n";
      out << "region     " << (r.lower_threshold ? "T < " + number(*r.lower_threshold) + " or " : "")
          << "T > " << number(r.upper_threshold) << "\n";
      break;
    case TestFamily::NType:
      out << "region     |T| >= " << number(r.upper_threshold) << "\n";
      if (r.diagnostics["zero_denominator"] != 0.0) out << "note       zero denominator, T set to 0\n";
      break;
  }
  out << "decision   " << (r.reject ? "reject H0" : "do not reject H0") << " at alpha = " << c.alpha << "\n";

  if (!c.out.empty()) {
    io::ResultRecord rec = make_record("two-sample", args, c);
    std::vector<fs::path> files;
    for (const auto& d : {o.sample1, o.sample2}) {
      std::vector<fs::path> in;
      for (const auto& e : fs::directory_iterator(d))
        if (e.is_regular_file() && e.path().extension() == ".csv") in.push_back(e.path());
      std::sort(in.begin(), in.end());
      files.insert(files.end(), in.begin(), in.end());
    }
    rec.inputs = io::file_inputs(files);
    rec.inputs["method"] = o.method;
    rec.inputs["alpha"] = c.alpha;
    rec.inputs["q_const"] = c.q_const;
    rec.payload = io::to_json(r);
    io::write_record(c.out, rec);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_detect(const std::string& manifest, const Common& c, bool alpha_given,
               const std::vector<std::string>& args, std::ostream& out) {
  const DynamicNetworkSeries series = io::load_series(manifest);
  ScanConfig cfg;
  cfg.window = c.h;
  cfg.estimator.kind = parse_estimator(c.estimator);
  cfg.estimator.mnbs.constant = c.q_const;
  if (alpha_given) cfg.alpha_override = c.alpha;
  const ChangePointResult r = detect_changepoints(series, cfg);

  out << "series     n = " << series.order() << ", m = " << series.length() << ", h = " << r.window
      << ", estimator " << to_string(r.estimator) << "\n";
  out << "estimated  " << join(r.estimated) << "\n";
  out << "candidates (t, T(t,h), Delta(t), local max, detected)\n";
  for (const auto& cand : r.trace) {
    out << "  " << cand.t << "  " << number(cand.statistic) << "  "
        << (cand.threshold ? number(cand.threshold->value) : std::string("-")) << "  "
        << (cand.local_max ? "yes" : "no") << "  " << (cand.detected ? "yes" : "no") << "\n";
  }
  Json payload = io::to_json(r);
  if (series.labels() && !series.labels()->empty()) {
    const BoysenDistances d = boysen_distances(r.estimated, *series.labels());
    auto show = [](const std::optional<double>& v) { return v ? number(*v, 2) : std::string("-"); };
    out << "truth      " << join(*series.labels()) << "\n";
    out << "boysen     eps1 = " << show(d.eps1) << ", eps2 = " << show(d.eps2) << "\n";
    payload["truth"] = *series.labels();
    payload["boysen"] = io::to_json(d);
  }
  if (!c.out.empty()) {
    io::ResultRecord rec = make_record("changepoint", args, c);
    std::vector<fs::path> files{manifest};
    const Json m = Json::parse(std::ifstream(manifest));
    for (const auto& f : m.at("files")) files.push_back(fs::path(manifest).parent_path() / f.get<std::string>());
    rec.inputs = io::file_inputs(files);
    rec.inputs["estimator"] = c.estimator;
    rec.inputs["h"] = r.window;
    rec.inputs["q_const"] = c.q_const;
    if (alpha_given) rec.inputs["alpha"] = c.alpha;
    rec.payload = payload;
    io::write_record(c.out, rec);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_bench(const std::string& id, const Common& c, const std::vector<std::string>& args,
              std::ostream& out, std::ostream& err) {
  BenchRequest req;
  req.id = id;
  req.scale = c.scale;
  req.replicates = c.replicates;
  req.seed = c.seed;
  req.alpha = c.alpha;
  req.q_constant = c.q_const;
  const BenchmarkReport rep = run_benchmark(req);
  out << render_table(rep);
  for (const auto& w : rep.warnings) err << "warning: " << w << "\n";
  if (!c.out.empty()) {
    io::ResultRecord rec = make_record("benchmark", args, c);
    rec.inputs = Json{{"id", id},
                      {"scale", c.scale},
                      {"replicates", rep.replicates},
                      {"alpha", c.alpha},
                      {"q_const", c.q_const}};
    rec.payload = io::to_json(rep);
    io::write_record(c.out, rec);
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tracy-Widom two-sample tests and change-point detection for network populations",
               "netpop"};
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Common c;
  auto add_seed = [&](CLI::App* s) { s->add_option("--seed", c.seed, "random seed")->capture_default_str(); };
  auto add_alpha = [&](CLI::App* s, const char* help) {
    return s->add_option("--alpha", c.alpha, help)->check(CLI::Range(0.0, 1.0));
  };
  auto add_q = [&](CLI::App* s) {
    s->add_option("--q-const", c.q_const, "MNBS constant C in q = C log n / (sqrt(n) omega)")
        ->check(CLI::PositiveNumber);
  };

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "simulate a two-sample or dynamic-network scenario");
  simulate->add_option("preset", sim.preset, "scenario preset")
      ->required()
      ->check(CLI::IsMember({"two-sample-null", "two-sample-alt", "no-cp", "single-cp", "three-cp"}));
  simulate->add_option("--model", sim.model, "generating model")
      ->check(CLI::IsMember({"graphon1", "graphon2", "graphon3", "sbm1"}));
  simulate->add_option("--n", sim.n, "number of nodes")->check(CLI::Range(3, 100000));
  simulate->add_option("--m", sim.m, "networks per sample / series length")->check(CLI::Range(2, 100000));
  simulate->add_option("--rho", sim.rho, "sparsity factor in (0, 1]")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--theta", sim.theta, "perturbation for two-sample-alt");
  add_seed(simulate);
  simulate->add_option("--out", c.out, "output directory")->required();

  TestOptions test;
  auto* test_cmd = app.add_subcommand("test", "two-sample test between two directories of adjacency CSVs");
  test_cmd->add_option("sample1", test.sample1, "first sample directory")->required()->check(CLI::ExistingDirectory);
  test_cmd->add_option("sample2", test.sample2, "second sample directory")->required()->check(CLI::ExistingDirectory);
  test_cmd->add_option("--method", test.method, "test")
      ->check(CLI::IsMember({"tw1-avg", "tw1-sbm", "tw1-mnbs", "chi2", "ntype"}))
      ->capture_default_str();
  add_alpha(test_cmd, "significance level")->capture_default_str();
  add_q(test_cmd);
  test_cmd->add_flag("--one-sided", test.one_sided, "chi2: reject only in the upper tail");
  add_seed(test_cmd);
  test_cmd->add_option("--out", c.out, "result record path");

  std::string manifest;
  auto* detect = app.add_subcommand("detect", "change-point detection on a series manifest");
  detect->add_option("manifest", manifest, "series manifest (JSON)")->required()->check(CLI::ExistingFile);
  detect->add_option("--h", c.h, "window size (default round(sqrt(m)))");
  detect->add_option("--estimator", c.estimator, "plug-in estimator")
      ->check(CLI::IsMember({"avg", "sbm", "mnbs"}))
      ->capture_default_str();
  auto* detect_alpha = add_alpha(detect, "override the threshold level alpha(n, h)");
  add_q(detect);
  add_seed(detect);
  detect->add_option("--out", c.out, "result record path");

  std::string bench_id;
  auto* bench = app.add_subcommand("bench", "run a simulation experiment grid");
  bench->add_option("id", bench_id, "experiment id")->required()->check(CLI::IsMember(bench_ids()));
  bench->add_option("--scale", c.scale, "factor applied to node counts (and R unless given)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--replicates,--R", c.replicates, "Monte Carlo replicates per cell")->check(CLI::PositiveNumber);
  add_alpha(bench, "significance level of the two-sample tests")->capture_default_str();
  add_q(bench);
  add_seed(bench);
  bench->add_option("--out", c.out, "result record path");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim, c, out);
    if (*test_cmd) return cmd_test(test, c, args, out);
    if (*detect) return cmd_detect(manifest, c, detect_alpha->count() > 0, args, out);
    if (*bench) return cmd_bench(bench_id, c, args, out, err);
  } catch (const UnsupportedConfig& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace netpop
