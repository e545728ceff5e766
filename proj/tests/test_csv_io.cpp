#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "coskit/csv_io.hpp"
#include "coskit/errors.hpp"
#include "doctest.h"
#include "support.hpp"

namespace fs = std::filesystem;
using coskit::ErrorCode;
using test_support::thrown_code;

namespace {

// Fresh scratch directory per test case; removed on destruction.
struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("coskit_csv_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path operator/(const std::string& name) const { return path / name; }
};

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("csv pair round-trips a random dataset field-for-field") {
  TempDir tmp;
  std::mt19937_64 rng(20240816);
  const auto ds = test_support::random_dataset(rng, 5, 60, 3, 2);
  coskit::save_csv_pair(ds, tmp / "units.csv", tmp / "clusters.csv",
                        {"written by the round-trip test"});
  const auto back = coskit::load_csv_pair(tmp / "units.csv", tmp / "clusters.csv");

  CHECK(back.unit_ids() == ds.unit_ids());
  CHECK(back.unit_cluster() == ds.unit_cluster());
  CHECK(back.cluster_ids() == ds.cluster_ids());
  CHECK(back.treatment() == ds.treatment());
  CHECK(back.outcomes() == ds.outcomes());            // bit-exact
  CHECK(back.unit_covariates() == ds.unit_covariates());
  CHECK(back.cluster_covariates() == ds.cluster_covariates());
  // Kinds are re-inferred on load; N(0,1) draws are never all 0/1 here.
  CHECK(back.unit_schema() == ds.unit_schema());
  CHECK(back.cluster_schema() == ds.cluster_schema());
}

TEST_CASE("saving a loaded pair reproduces the files byte for byte") {
  TempDir tmp;
  std::mt19937_64 rng(4242);
  const auto ds = test_support::random_dataset(rng, 4, 30, 2, 1);
  coskit::save_csv_pair(ds, tmp / "u1.csv", tmp / "c1.csv");
  const auto back = coskit::load_csv_pair(tmp / "u1.csv", tmp / "c1.csv");
  coskit::save_csv_pair(back, tmp / "u2.csv", tmp / "c2.csv");
  CHECK(read_file(tmp / "u1.csv") == read_file(tmp / "u2.csv"));
  CHECK(read_file(tmp / "c1.csv") == read_file(tmp / "c2.csv"));
}

TEST_CASE("loader accepts comments, blank lines and CRLF endings") {
  TempDir tmp;
  write_file(tmp / "units.csv",
             "# generated elsewhere\r\n"
             "unit_id,cluster_id,y,x1\r\n"
             "\r\n"
             "u1,c1,1.5,0.25\r\n"
             "u2,c2,-2,1e3\r\n");
  write_file(tmp / "clusters.csv",
             "cluster_id,a,w\n"
             "# mid-file comment\n"
             "c1,1,0.5\n"
             "c2,0,-0.5\n");
  const auto ds = coskit::load_csv_pair(tmp / "units.csv", tmp / "clusters.csv");
  CHECK(ds.n_units() == 2);
  CHECK(ds.n_clusters() == 2);
  CHECK(ds.outcomes()(0) == 1.5);
  CHECK(ds.unit_covariates()(1, 0) == 1000.0);
  CHECK(ds.cluster_covariates()(0, 0) == 0.5);
}

TEST_CASE("loader works without any covariate columns") {
  TempDir tmp;
  write_file(tmp / "units.csv",
             "unit_id,cluster_id,y\nu1,c1,1\nu2,c2,2\n");
  write_file(tmp / "clusters.csv", "cluster_id,a\nc1,1\nc2,0\n");
  const auto ds = coskit::load_csv_pair(tmp / "units.csv", tmp / "clusters.csv");
  CHECK(ds.unit_schema().empty());
  CHECK(ds.cluster_schema().empty());
  CHECK(ds.unit_covariates().cols() == 0);
}

TEST_CASE("loader reports malformed input with the right code") {
  TempDir tmp;
  const auto units = tmp / "units.csv";
  const auto clusters = tmp / "clusters.csv";
  write_file(clusters, "cluster_id,a\nc1,1\nc2,0\n");

  SUBCASE("missing file") {
    CHECK(thrown_code([&] {
            coskit::load_csv_pair(tmp / "nope.csv", clusters);
          }) == ErrorCode::IoFailure);
  }
  SUBCASE("empty file") {
    write_file(units, "");
    CHECK(thrown_code([&] { coskit::load_csv_pair(units, clusters); }) ==
          ErrorCode::BadHeader);
  }
  SUBCASE("wrong fixed column name") {
    write_file(units, "id,cluster_id,y\nu1,c1,1\n");
    CHECK(thrown_code([&] { coskit::load_csv_pair(units, clusters); }) ==
          ErrorCode::BadHeader);
  }
  SUBCASE("empty covariate name in header") {
    write_file(units, "unit_id,cluster_id,y,\nu1,c1,1,2\n");
    CHECK(thrown_code([&] { coskit::load_csv_pair(units, clusters); }) ==
          ErrorCode::BadHeader);
  }
  SUBCASE("empty numeric cell") {
    write_file(units, "unit_id,cluster_id,y\nu1,c1,\nu2,c2,1\n");
    CHECK(thrown_code([&] { coskit::load_csv_pair(units, clusters); }) ==
          ErrorCode::MissingValue);
  }
  SUBCASE("non-numeric outcome") {
    write_file(units, "unit_id,cluster_id,y\nu1,c1,abc\n");
    CHECK(thrown_code([&] { coskit::load_csv_pair(units, clusters); }) ==
          ErrorCode::BadNumericField);
  }
  SUBCASE("row with too few fields") {
    write_file(units, "unit_id,cluster_id,y,x1\nu1,c1,1\n");
    CHECK(thrown_code([&] { coskit::load_csv_pair(units, clusters); }) ==
          ErrorCode::BadNumericField);
  }
  SUBCASE("treatment other than 0/1") {
    write_file(units, "unit_id,cluster_id,y\nu1,c1,1\nu2,c2,2\n");
    write_file(clusters, "cluster_id,a\nc1,2\nc2,0\n");
    CHECK(thrown_code([&] { coskit::load_csv_pair(units, clusters); }) ==
          ErrorCode::BadNumericField);
  }
  SUBCASE("unit referencing missing cluster row") {
    write_file(units, "unit_id,cluster_id,y\nu1,c1,1\nu2,c9,2\n");
    CHECK(thrown_code([&] { coskit::load_csv_pair(units, clusters); }) ==
          ErrorCode::DanglingClusterRef);
  }
}

TEST_CASE("truth file round-trips and validates its header") {
  TempDir tmp;
  const std::vector<coskit::TruthRecord> rows{
      {"u1", 1.25, 1.0, 0.25},
      {"u2", -0.5, -0.75, 0.25},
  };
  coskit::save_truth(rows, tmp / "truth.csv", {"one comment"});
  const auto back = coskit::load_truth(tmp / "truth.csv");
  REQUIRE(back.size() == 2);
  CHECK(back[0].unit_id == "u1");
  CHECK(back[0].y1 == 1.25);
  CHECK(back[1].y0 == -0.75);
  CHECK(back[1].ite == 0.25);

  write_file(tmp / "bad.csv", "unit_id,y1,y0\nu1,1,1\n");
  CHECK(thrown_code([&] { coskit::load_truth(tmp / "bad.csv"); }) ==
        ErrorCode::BadHeader);
}
