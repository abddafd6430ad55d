#include "netpop/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "netpop/error.hpp"

namespace netpop::io {

namespace {

std::string where(const std::string& source, std::size_t row, std::size_t col) {
  return source + ": row " + std::to_string(row) + ", column " + std::to_string(col);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path.string() + ": cannot open file for writing");
  out << text;
  if (!out) throw Error(path.string() + ": write failed");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Rows of comma-separated cells; blank trailing lines are ignored.
std::vector<std::vector<std::string_view>> split_csv(std::string_view text) {
  std::vector<std::vector<std::string_view>> rows;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    line = trim(line);
    std::vector<std::string_view> cells;
    if (!line.empty()) {
      std::size_t start = 0;
      while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
    }
    rows.push_back(std::move(cells));
  }
  while (!rows.empty() && rows.back().empty()) rows.pop_back();
  return rows;
}

void check_square(const std::vector<std::vector<std::string_view>>& rows, const std::string& source) {
  if (rows.empty()) throw ParseError(source + ": empty matrix");
  const std::size_t n = rows.size();
  for (std::size_t i = 0; i < n; ++i)
    if (rows[i].size() != n)
      throw ParseError(source + ": row " + std::to_string(i + 1) + " has " +
                       std::to_string(rows[i].size()) + " entries, expected " + std::to_string(n) +
                       " (matrix must be square)");
}

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string padded(std::size_t k, std::size_t total) {
  const std::size_t width = std::max<std::size_t>(4, std::to_string(total).size());
  std::string s = std::to_string(k);
  return std::string(width - s.size(), '0') + s;
}

}  // namespace

AdjacencyMatrix parse_adjacency_csv(std::string_view text, const std::string& source) {
  const auto rows = split_csv(text);
  check_square(rows, source);
  const auto n = static_cast<Index>(rows.size());
  AdjacencyStorage a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const std::string_view cell = rows[i][j];
      if (cell != "0" && cell != "1")
        throw ParseError(where(source, i + 1, j + 1) + ": expected 0 or 1, got '" + std::string(cell) + "'");
      a(i, j) = cell == "1" ? 1 : 0;
      if (i == j && a(i, j) != 0) throw ParseError(where(source, i + 1, j + 1) + ": nonzero diagonal");
      if (j < i && a(i, j) != a(j, i))
        throw ParseError(where(source, i + 1, j + 1) + ": matrix is not symmetric");
    }
  return AdjacencyMatrix(std::move(a));
}

AdjacencyMatrix read_adjacency_csv(const fs::path& path) {
  return parse_adjacency_csv(read_file(path), path.string());
}

std::string adjacency_csv(const AdjacencyMatrix& a) {
  const Index n = a.order();
  std::string out;
  out.reserve(static_cast<std::size_t>(2 * n * n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (j) out += ',';
      out += a(i, j) ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

void write_adjacency_csv(const fs::path& path, const AdjacencyMatrix& a) { write_file(path, adjacency_csv(a)); }

MatrixXd parse_real_matrix_csv(std::string_view text, const std::string& source) {
  const auto rows = split_csv(text);
  check_square(rows, source);
  const auto n = static_cast<Index>(rows.size());
  MatrixXd m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const std::string_view cell = rows[i][j];
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() || !std::isfinite(v))
        throw ParseError(where(source, i + 1, j + 1) + ": not a finite number: '" + std::string(cell) + "'");
      m(i, j) = v;
    }
  return m;
}

MatrixXd read_real_matrix_csv(const fs::path& path) { return parse_real_matrix_csv(read_file(path), path.string()); }

std::string real_matrix_csv(const MatrixXd& m) {
  std::string out;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += shortest(m(i, j));
    }
    out += '\n';
  }
  return out;
}

AdjacencyMatrix threshold_correlation(const MatrixXd& r, double threshold) {
  const MatrixXd sym = symmetrized(r);
  const Index n = sym.rows();
  AdjacencyStorage a = AdjacencyStorage::Zero(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < j; ++i) a(i, j) = a(j, i) = sym(i, j) > threshold ? 1 : 0;
  return AdjacencyMatrix(std::move(a));
}

AdjacencyMatrix read_edge_list(const fs::path& path, std::optional<Index> order) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  std::vector<std::pair<Index, Index>> edges;
  Index largest = 0;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long long u, v;
    if (!(ls >> u)) continue;
    std::string rest;
    if (!(ls >> v) || (ls >> rest))
      throw ParseError(path.string() + ": line " + std::to_string(lineno) + ": expected two node ids");
    if (u < 1 || v < 1)
      throw ParseError(path.string() + ": line " + std::to_string(lineno) + ": node ids are 1-based");
    if (u == v) throw ParseError(path.string() + ": line " + std::to_string(lineno) + ": self-loop");
    edges.emplace_back(u - 1, v - 1);
    largest = std::max<Index>(largest, std::max(u, v));
  }
  const Index n = order ? *order : largest;
  if (n < 1) throw ParseError(path.string() + ": no edges and no order given");
  AdjacencyStorage a = AdjacencyStorage::Zero(n, n);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n)
      throw ParseError(path.string() + ": node id " + std::to_string(std::max(u, v) + 1) +
                       " exceeds order " + std::to_string(n));
    a(u, v) = a(v, u) = 1;
  }
  return AdjacencyMatrix(std::move(a));
}

NetworkSample load_sample_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ParseError(dir.string() + ": not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  if (files.empty()) throw ParseError(dir.string() + ": no .csv files");
  std::sort(files.begin(), files.end());
  std::vector<AdjacencyMatrix> mats;
  for (const auto& f : files) {
    mats.push_back(read_adjacency_csv(f));
    if (mats.back().order() != mats.front().order())
      throw ParseError(f.string() + ": order " + std::to_string(mats.back().order()) + " differs from " +
                       std::to_string(mats.front().order()) + " in " + files.front().string());
  }
  return NetworkSample(std::move(mats));
}

void write_sample_dir(const fs::path& dir, const NetworkSample& sample) {
  fs::create_directories(dir);
  const auto& mats = sample.matrices();
  for (std::size_t k = 0; k < mats.size(); ++k)
    write_adjacency_csv(dir / ("a" + padded(k + 1, mats.size()) + ".csv"), mats[k]);
}

DynamicNetworkSeries load_series(const fs::path& manifest) {
  Json j;
  try {
    j = Json::parse(read_file(manifest));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(manifest.string() + ": invalid JSON: " + e.what());
  }
  auto field = [&](const char* key) -> const Json& {
    if (!j.contains(key)) throw ParseError(manifest.string() + ": missing field '" + key + "'");
    return j.at(key);
  };
  try {
    if (field("format") != "netpop-series") throw ParseError(manifest.string() + ": not a netpop-series manifest");
    if (field("version") != 1)
      throw ParseError(manifest.string() + ": unsupported manifest version " + field("version").dump());
    const auto order = field("order").get<Index>();
    const auto length = field("length").get<int>();
    const auto files = field("files").get<std::vector<std::string>>();
    if (static_cast<int>(files.size()) != length)
      throw ParseError(manifest.string() + ": 'length' is " + std::to_string(length) + " but " +
                       std::to_string(files.size()) + " files are listed");
    std::optional<std::vector<int>> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<int>>();
    const fs::path base = manifest.parent_path();
    std::vector<AdjacencyMatrix> mats;
    for (std::size_t k = 0; k < files.size(); ++k) {
      const fs::path f = base / files[k];
      try {
        mats.push_back(read_adjacency_csv(f));
      } catch (const Error& e) {
        throw ParseError("series file " + std::to_string(k + 1) + " (" + f.string() + "): " + e.what());
      }
      if (mats.back().order() != order)
        throw ParseError("series file " + std::to_string(k + 1) + " (" + f.string() + "): order " +
                         std::to_string(mats.back().order()) + ", manifest says " + std::to_string(order));
    }
    return DynamicNetworkSeries(std::move(mats), std::move(labels));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(manifest.string() + ": malformed manifest: " + e.what());
  }
}

fs::path write_series(const fs::path& dir, const DynamicNetworkSeries& series) {
  fs::create_directories(dir);
  Json files = Json::array();
  const auto& mats = series.matrices();
  for (std::size_t k = 0; k < mats.size(); ++k) {
    const std::string name = "t" + padded(k + 1, mats.size()) + ".csv";
    write_adjacency_csv(dir / name, mats[k]);
    files.push_back(name);
  }
  Json j;
  j["format"] = "netpop-series";
  j["version"] = 1;
  j["order"] = series.order();
  j["length"] = series.length();
  j["files"] = files;
  if (series.labels()) j["labels"] = *series.labels();
  const fs::path path = dir / "manifest.json";
  write_file(path, j.dump(2) + "\n");
  return path;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string sha256_file(const fs::path& path) { return sha256_hex(read_file(path)); }

Json file_inputs(const std::vector<fs::path>& files) {
  Json list = Json::array();
  for (const auto& f : files) list.push_back({{"path", f.generic_string()}, {"sha256", sha256_file(f)}});
  return Json{{"files", list}};
}

Json to_json(const ResultRecord& r) {
  Json j;
  j["format"] = "netpop-result";
  j["version"] = kRecordVersion;
  j["kind"] = r.kind;
  j["tool_version"] = r.tool_version;
  j["invocation"] = r.invocation;
  j["seeds"] = r.seeds;
  j["inputs"] = r.inputs;
  j["inputs_digest"] = sha256_hex(r.inputs.dump());
  j["payload"] = r.payload;
  return j;
}

ResultRecord record_from_json(const Json& j) {
  try {
    if (j.at("format") != "netpop-result") throw ParseError("not a netpop-result record");
    if (j.at("version") != kRecordVersion) throw ParseError("unsupported record version " + j.at("version").dump());
    ResultRecord r;
    r.kind = j.at("kind").get<std::string>();
    r.tool_version = j.at("tool_version").get<std::string>();
    r.invocation = j.at("invocation").get<std::vector<std::string>>();
    r.seeds = j.at("seeds");
    r.inputs = j.at("inputs");
    r.payload = j.at("payload");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed result record: ") + e.what());
  }
}

std::string record_text(const ResultRecord& record) { return to_json(record).dump(2) + "\n"; }

void write_record(const fs::path& path, const ResultRecord& record) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_file(path, record_text(record));
}

ResultRecord read_record(const fs::path& path) {
  try {
    return record_from_json(Json::parse(read_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": invalid JSON: " + e.what());
  }
}

bool verify_record(const Json& j) {
  if (!j.contains("inputs") || !j.contains("inputs_digest")) return false;
  const Json& inputs = j.at("inputs");
  if (sha256_hex(inputs.dump()) != j.at("inputs_digest")) return false;
  if (inputs.contains("files"))
    for (const auto& f : inputs.at("files")) {
      const fs::path p = f.at("path").get<std::string>();
      if (fs::exists(p) && sha256_file(p) != f.at("sha256")) return false;
    }
  return true;
}

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json to_json(const TestResult& r) {
  Json j;
  j["family"] = to_string(r.family);
  j["statistic"] = r.statistic;
  j["alpha"] = r.alpha;
  j["lower_threshold"] = optional_number(r.lower_threshold);
  j["upper_threshold"] = std::isfinite(r.upper_threshold) ? Json(r.upper_threshold) : Json(nullptr);
  j["reject"] = r.reject;
  if (r.family == TestFamily::Tw1) j["estimator"] = r.estimator;
  if (r.family == TestFamily::ChiSq) {
    j["df"] = r.df;
    j["sidedness"] = r.sidedness == Sidedness::TwoSided ? "two-sided" : "upper";
  }
  j["diagnostics"] = Json(r.diagnostics);
  return j;
}

Json to_json(const ChangePointResult& r) {
  Json j;
  j["window"] = r.window;
  j["estimator"] = to_string(r.estimator);
  j["estimated"] = r.estimated;
  Json trace = Json::array();
  for (const auto& c : r.trace) {
    Json e{{"t", c.t}, {"statistic", c.statistic}, {"local_max", c.local_max}, {"detected", c.detected}};
    if (c.threshold) {
      e["threshold"] = c.threshold->value;
      e["alpha"] = c.threshold->alpha;
      e["tau_alpha"] = c.threshold->tau;
      e["delta"] = c.threshold->delta;
      e["tau_clamped"] = c.threshold->clamped;
    }
    trace.push_back(e);
  }
  j["trace"] = trace;
  return j;
}

Json to_json(const BoysenDistances& d) {
  return Json{{"eps1", optional_number(d.eps1)}, {"eps2", optional_number(d.eps2)}};
}

Json to_json(const BenchmarkReport& r) {
  Json j;
  j["id"] = r.id;
  j["title"] = r.title;
  j["scale"] = r.scale;
  j["replicates"] = r.replicates;
  j["reference_replicates"] = r.reference_replicates;
  j["alpha"] = r.alpha;
  j["q_constant"] = r.q_constant;
  j["methods"] = r.methods;
  Json cells = Json::array();
  for (const auto& c : r.two_sample) {
    Json cell{{"family", c.scenario.family == GraphonFamily::Graphon1 ? "graphon1" : "graphon2"},
              {"n", c.scenario.n},
              {"n_reference", c.reference_n},
              {"m", c.scenario.m1},
              {"hypothesis", c.scenario.alternative ? "alternative" : "null"},
              {"theta", c.scenario.theta},
              {"seed", c.seed}};
    Json rates = Json::array();
    for (std::size_t k = 0; k < c.rates.size(); ++k)
      rates.push_back({{"method", r.methods[k]},
                       {"rejections", c.rates[k].rejections},
                       {"replicates", c.rates[k].replicates},
                       {"reject_rate", c.rates[k].rate()}});
    cell["results"] = rates;
    cells.push_back(cell);
  }
  for (const auto& c : r.changepoint) {
    Json cell{{"scenario", to_string(c.scenario.kind)},
              {"n", c.scenario.n},
              {"n_reference", c.reference_n},
              {"m", c.scenario.m},
              {"rho", c.scenario.rho},
              {"seed", c.seed}};
    Json rows = Json::array();
    for (std::size_t k = 0; k < c.summaries.size(); ++k) {
      const auto& s = c.summaries[k];
      rows.push_back({{"method", r.methods[k]},
                      {"replicates", s.replicates},
                      {"detections", s.detections},
                      {"detect_rate", s.detect_rate()},
                      {"mean_jhat_all_runs", s.mean_found()},
                      {"mean_jhat_efficient", optional_number(s.mean_found_efficient())},
                      {"eps1_efficient", optional_number(s.mean_eps1())},
                      {"eps2_efficient", optional_number(s.mean_eps2())}});
    }
    cell["results"] = rows;
    cells.push_back(cell);
  }
  j["cells"] = cells;
  j["warnings"] = r.warnings;
  return j;
}

}  // namespace netpop::io
