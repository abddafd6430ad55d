#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "netpop/bench.hpp"
#include "netpop/changepoint.hpp"
#include "netpop/graph_model.hpp"
#include "netpop/two_sample.hpp"

namespace netpop::io {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Dense adjacency CSV: n lines of n comma-separated 0/1 values. Errors name
// the 1-based (row, column) of the offending entry.

AdjacencyMatrix parse_adjacency_csv(std::string_view text, const std::string& source = "<memory>");
AdjacencyMatrix read_adjacency_csv(const fs::path& path);
std::string adjacency_csv(const AdjacencyMatrix& a);
void write_adjacency_csv(const fs::path& path, const AdjacencyMatrix& a);

/// Square matrix of reals, comma separated (e.g. a correlation matrix).
MatrixXd parse_real_matrix_csv(std::string_view text, const std::string& source = "<memory>");
MatrixXd read_real_matrix_csv(const fs::path& path);
/// Shortest round-trip decimal text.
std::string real_matrix_csv(const MatrixXd& m);

/// A_ij = 1 iff R_ij > threshold and i != j. R must be symmetric and finite.
AdjacencyMatrix threshold_correlation(const MatrixXd& r, double threshold);

/// Whitespace-separated "i j" pairs with 1-based node ids; '#' starts a
/// comment. Without `order`, n is the largest id seen. Self-loops are errors.
AdjacencyMatrix read_edge_list(const fs::path& path, std::optional<Index> order = std::nullopt);

// ---------------------------------------------------------------------------
// Samples and series

/// Every *.csv in `dir`, in lexicographic file-name order.
NetworkSample load_sample_dir(const fs::path& dir);
/// Writes A_k as "a0001.csv", ... (zero-padded to at least 4 digits).
void write_sample_dir(const fs::path& dir, const NetworkSample& sample);

/// Manifest: {"format": "netpop-series", "version": 1, "order": n,
/// "length": m, "files": [...], "labels": [...]}. File paths are relative
/// to the manifest's directory; "labels" (true change-points) is optional.
DynamicNetworkSeries load_series(const fs::path& manifest);
/// Writes "t0001.csv", ... and `manifest.json` into `dir`; returns the
/// manifest path.
fs::path write_series(const fs::path& dir, const DynamicNetworkSeries& series);

// ---------------------------------------------------------------------------
// Result records

inline constexpr int kRecordVersion = 1;

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const fs::path& path);

/// Describes inputs: {"files": [{"path", "sha256"}...], ...extra fields}.
/// A record's digest is sha256 of inputs.dump().
Json file_inputs(const std::vector<fs::path>& files);

struct ResultRecord {
  std::string kind;  ///< "two-sample", "changepoint" or "benchmark"
  Json inputs = Json::object();
  Json payload = Json::object();
  Json seeds = Json::object();
  std::vector<std::string> invocation;
  std::string tool_version;
};

Json to_json(const ResultRecord& record);
ResultRecord record_from_json(const Json& j);
std::string record_text(const ResultRecord& record);  ///< pretty JSON plus newline
void write_record(const fs::path& path, const ResultRecord& record);
ResultRecord read_record(const fs::path& path);

/// Recomputes the inputs digest and, for listed files that still exist,
/// their SHA-256; false on any mismatch.
bool verify_record(const Json& record_json);

Json to_json(const TestResult& r);
Json to_json(const ChangePointResult& r);
Json to_json(const BoysenDistances& d);
Json to_json(const BenchmarkReport& r);

}  // namespace netpop::io
