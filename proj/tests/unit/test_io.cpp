#include <gtest/gtest.h>

#include <fstream>

#include "netpop/io.hpp"

using namespace netpop;
namespace fs = std::filesystem;

namespace {

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("netpop_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
};

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

AdjacencyMatrix random_adjacency(Index n, std::uint64_t seed) {
  Rng rng(seed);
  const auto p = graphon_link_matrix({GraphonFamily::Graphon3, draw_latent(n, rng)});
  return sample_adjacency(p, rng);
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(AdjacencyCsv, ParsesSmallMatrix) {
  const auto a = io::parse_adjacency_csv("0,1\n1,0");
  EXPECT_EQ(a.order(), 2);
  EXPECT_EQ(a.edge_count(), 1);
  EXPECT_EQ(io::parse_adjacency_csv("0,1\r\n1,0\r\n").edge_count(), 1);
}

TEST(AdjacencyCsv, ErrorsNameRowAndColumn) {
  EXPECT_NE(error_of([] { io::parse_adjacency_csv("0,1\n0,0"); }).find("row 2, column 1"), std::string::npos);
  EXPECT_NE(error_of([] { io::parse_adjacency_csv("0,2\n2,0"); }).find("row 1, column 2"), std::string::npos);
  EXPECT_NE(error_of([] { io::parse_adjacency_csv("1,0\n0,0"); }).find("row 1, column 1"), std::string::npos);
  EXPECT_THROW(io::parse_adjacency_csv("0,1,0\n1,0\n0,0,0"), ParseError);
  EXPECT_THROW(io::parse_adjacency_csv(""), ParseError);
}

TEST(AdjacencyCsv, RoundTrip) {
  const auto a = random_adjacency(25, 3);
  EXPECT_TRUE(io::parse_adjacency_csv(io::adjacency_csv(a)) == a);
}

TEST(RealMatrixCsv, RoundTripIsExact) {
  MatrixXd m(3, 3);
  m << 1.0, 0.1, -1e-300, 0.1, 1.0, 2.0 / 3.0, -1e-300, 2.0 / 3.0, 1.0;
  EXPECT_EQ(io::parse_real_matrix_csv(io::real_matrix_csv(m)), m);
  EXPECT_THROW(io::parse_real_matrix_csv("1,nan\nnan,1"), ParseError);
}

TEST(ThresholdCorrelation, Examples) {
  MatrixXd r = MatrixXd::Identity(3, 3);
  r(0, 1) = r(1, 0) = 0.2;
  r(0, 2) = r(2, 0) = 0.5;
  r(1, 2) = r(2, 1) = 0.7;
  const auto a = io::threshold_correlation(r, 0.45);
  EXPECT_EQ(a(0, 1), 0);
  EXPECT_EQ(a(0, 2), 1);
  EXPECT_EQ(a(1, 2), 1);
  EXPECT_EQ(a(0, 0), 0);
  EXPECT_EQ(io::threshold_correlation(r, 0.9).edge_count(), 0);
  EXPECT_EQ(io::threshold_correlation(r, 0.5)(0, 2), 0);
  MatrixXd bad = r;
  bad(0, 1) = 0.3;
  EXPECT_THROW(io::threshold_correlation(bad, 0.1), InvalidInput);
}

TEST_F(TempDir, EdgeList) {
  write_text(dir_ / "e.txt", "# comment\n1 2\n2 3 \n\n3 1\n");
  const auto a = io::read_edge_list(dir_ / "e.txt");
  EXPECT_EQ(a.order(), 3);
  EXPECT_EQ(a.edge_count(), 3);
  EXPECT_EQ(io::read_edge_list(dir_ / "e.txt", 5).order(), 5);
  EXPECT_THROW(io::read_edge_list(dir_ / "e.txt", 2), ParseError);
  write_text(dir_ / "loop.txt", "1 1\n");
  EXPECT_THROW(io::read_edge_list(dir_ / "loop.txt"), ParseError);
}

TEST_F(TempDir, SampleDirRoundTrip) {
  std::vector<AdjacencyMatrix> mats;
  for (int k = 0; k < 3; ++k) mats.push_back(random_adjacency(10, k));
  io::write_sample_dir(dir_ / "s", NetworkSample(mats));
  EXPECT_TRUE(fs::exists(dir_ / "s" / "a0001.csv"));
  const NetworkSample back = io::load_sample_dir(dir_ / "s");
  ASSERT_EQ(back.size(), 3);
  for (int k = 0; k < 3; ++k) EXPECT_TRUE(back.matrices()[k] == mats[k]);
  EXPECT_THROW(io::load_sample_dir(dir_ / "missing"), ParseError);
}

TEST_F(TempDir, SeriesManifest) {
  std::vector<AdjacencyMatrix> mats;
  for (int k = 0; k < 3; ++k) mats.push_back(random_adjacency(8, 10 + k));
  const fs::path manifest = io::write_series(dir_ / "series", DynamicNetworkSeries(mats, std::vector<int>{2}));
  const auto s = io::load_series(manifest);
  EXPECT_EQ(s.length(), 3);
  EXPECT_EQ(*s.labels(), std::vector<int>{2});
  for (int k = 0; k < 3; ++k) EXPECT_TRUE(s.matrices()[k] == mats[k]);

  // Replace file 2 with a matrix of another order.
  io::write_adjacency_csv(dir_ / "series" / "t0002.csv", random_adjacency(9, 1));
  const std::string msg = error_of([&] { io::load_series(manifest); });
  EXPECT_NE(msg.find("series file 2"), std::string::npos) << msg;
}

TEST_F(TempDir, SeriesManifestErrors) {
  write_text(dir_ / "m.json", "{\"format\": \"netpop-series\", \"version\": 1, \"order\": 2, \"length\": 2, \"files\": [\"a.csv\"]}");
  EXPECT_THROW(io::load_series(dir_ / "m.json"), ParseError);
  write_text(dir_ / "m.json", "{not json");
  EXPECT_THROW(io::load_series(dir_ / "m.json"), ParseError);
  write_text(dir_ / "m.json", "{\"format\": \"other\"}");
  EXPECT_THROW(io::load_series(dir_ / "m.json"), ParseError);
}

TEST(Sha256, KnownDigests) {
  EXPECT_EQ(io::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(io::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_F(TempDir, RecordDigestVerification) {
  io::write_adjacency_csv(dir_ / "x.csv", random_adjacency(4, 1));
  io::ResultRecord rec;
  rec.kind = "two-sample";
  rec.inputs = io::file_inputs({dir_ / "x.csv"});
  rec.inputs["alpha"] = 0.05;
  rec.payload = {{"statistic", 1.25}};
  rec.seeds = {{"seed", 7}};
  rec.invocation = {"netpop", "test"};
  rec.tool_version = "test";
  io::write_record(dir_ / "r.json", rec);

  const auto back = io::read_record(dir_ / "r.json");
  EXPECT_EQ(io::record_text(back), io::record_text(rec));
  auto j = io::to_json(back);
  EXPECT_TRUE(io::verify_record(j));
  j["inputs"]["alpha"] = 0.1;
  EXPECT_FALSE(io::verify_record(j));

  // Changing a referenced file is detected.
  io::write_adjacency_csv(dir_ / "x.csv", random_adjacency(4, 2));
  EXPECT_FALSE(io::verify_record(io::to_json(back)));
}

TEST(ResultJson, TestResultFields) {
  TestResult r;
  r.family = TestFamily::ChiSq;
  r.statistic = 3.5;
  r.lower_threshold = 1.0;
  r.upper_threshold = 9.0;
  r.df = 4;
  const auto j = io::to_json(r);
  EXPECT_EQ(j.at("family"), "chi2");
  EXPECT_EQ(j.at("statistic"), 3.5);
  EXPECT_EQ(j.at("lower_threshold"), 1.0);
}
