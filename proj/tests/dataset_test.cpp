#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "discomax/dataset.hpp"
#include "support.hpp"

using namespace discomax;

namespace {

std::string write_temp_csv(const std::string& name, const std::string& content) {
  const std::string path =
      (std::filesystem::temp_directory_path() / ("discomax_test_" + name)).string();
  std::ofstream out(path, std::ios::trunc);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("load_csv basic shape") {
  const std::string path = write_temp_csv("basic.csv", "x,y\n0,1\n1,3\n2,5\n");
  const Dataset ds = load_csv(path, {"y"}, false);
  CHECK(ds.x.rows() == 3);
  CHECK(ds.x.cols() == 1);
  CHECK(ds.y.cols() == 1);
  CHECK(ds.feature_names == std::vector<std::string>{"x"});
  CHECK(ds.response_names == std::vector<std::string>{"y"});
  CHECK(ds.y(2, 0) == 5.0);
  CHECK_FALSE(ds.standardized);
}

TEST_CASE("load_csv with several response columns") {
  const std::string path =
      write_temp_csv("multi.csv", "a,b,y1,y2\n1,2,3,4\n5,6,7,8\n9,10,11,13\n");
  const Dataset ds = load_csv(path, {"y1", "y2"}, false);
  CHECK(ds.x.cols() == 2);
  CHECK(ds.y.cols() == 2);
  CHECK(ds.response_names == std::vector<std::string>{"y1", "y2"});
  CHECK(ds.y(2, 1) == 13.0);
}

TEST_CASE("load_csv reports the offending cell") {
  const std::string missing = write_temp_csv("missing.csv", "a,b,y\n1,2,3\n4,,6\n7,8,9\n");
  CHECK_THROWS_WITH_AS(load_csv(missing, {"y"}, false),
                       doctest::Contains("row 2, column 'b'"), csv_error);

  const std::string bad = write_temp_csv("bad.csv", "a,y\n1,2\n3,4\nfoo,6\n");
  CHECK_THROWS_WITH_AS(load_csv(bad, {"y"}, false),
                       doctest::Contains("row 3, column 'a'"), csv_error);

  const std::string inf = write_temp_csv("inf.csv", "a,y\n1,2\ninf,4\n5,6\n");
  CHECK_THROWS_AS(load_csv(inf, {"y"}, false), csv_error);
}

TEST_CASE("load_csv validates the header and responses") {
  const std::string path = write_temp_csv("resp.csv", "a,b,y\n1,2,3\n4,5,6\n7,8,10\n");
  CHECK_THROWS_WITH_AS(load_csv(path, {"zzz"}, false),
                       doctest::Contains("unknown response column 'zzz'"), csv_error);
  CHECK_THROWS_AS(load_csv(path, {"a", "b", "y"}, false), csv_error);  // no features left
  CHECK_THROWS_AS(load_csv(path, {}, false), csv_error);
}

TEST_CASE("load_csv rejects a constant response") {
  const std::string path = write_temp_csv("const.csv", "a,y\n1,5\n2,5\n3,5\n");
  CHECK_THROWS_AS(load_csv(path, {"y"}, false), degenerate_error);
}

TEST_CASE("load_csv requires at least three rows and an existing file") {
  const std::string path = write_temp_csv("short.csv", "a,y\n1,2\n3,4\n");
  CHECK_THROWS_AS(load_csv(path, {"y"}, false), csv_error);
  CHECK_THROWS_AS(load_csv("/nonexistent/nope.csv", {"y"}, false), io_error);
}

TEST_CASE("load_csv rejects ragged rows") {
  const std::string path = write_temp_csv("ragged.csv", "a,b,y\n1,2,3\n4,5\n6,7,8\n");
  CHECK_THROWS_WITH_AS(load_csv(path, {"y"}, false), doctest::Contains("row 2"), csv_error);
}

TEST_CASE("standardized features have zero mean and unit deviation") {
  const Dataset raw = testsupport::make_synthetic(21, 40, 3);
  const std::string path =
      (std::filesystem::temp_directory_path() / "discomax_test_std.csv").string();
  testsupport::write_dataset_csv(raw, path);

  const Dataset ds = load_csv(path, {"y"}, true);
  CHECK(ds.standardized);
  const double n = static_cast<double>(ds.x.rows());
  for (std::size_t j = 0; j < ds.x.cols(); ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < ds.x.rows(); ++i) mean += ds.x(i, j);
    mean /= n;
    CHECK(std::fabs(mean) <= 1e-12);
    double var = 0.0;
    for (std::size_t i = 0; i < ds.x.rows(); ++i)
      var += (ds.x(i, j) - mean) * (ds.x(i, j) - mean);
    CHECK(std::fabs(std::sqrt(var / (n - 1.0)) - 1.0) <= 1e-9);
  }
}

TEST_CASE("read_csv_matrix round-trips 17-digit output exactly") {
  Rng rng(23);
  Matrix m(5, 3, 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.normal() * 1e3;

  const std::string path =
      (std::filesystem::temp_directory_path() / "discomax_test_roundtrip.csv").string();
  std::ofstream out(path, std::ios::trunc);
  out << "c1,c2,c3\n";
  char buf[40];
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << (j ? "," : "") << buf;
    }
    out << "\n";
  }
  out.close();

  const Matrix back = read_csv_matrix(path);
  CHECK(max_abs_diff(m, back) == 0.0);
}
