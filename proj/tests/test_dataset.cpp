#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "sdbscan/dataset.hpp"
#include "sdbscan/error.hpp"
#include "support/oracles.hpp"

using namespace sdbscan;

namespace {

Dataset from_csv(const std::string& text, std::optional<std::size_t> label = std::nullopt) {
  std::istringstream in(text);
  return parse_dataset(in, DataFormat::dense_csv, label);
}

double dist(std::vector<double> x, std::vector<double> y, DistanceMeasure m) {
  return distance(x, y, m);
}

}  // namespace

TEST_CASE("dense CSV read-back") {
  const Dataset d = from_csv("1,0\n0,1\n1,1");
  CHECK(d.n() == 3);
  CHECK(d.d() == 2);
  CHECK(d.row(2)[0] == 1.0);
  CHECK(d.row(1)[1] == 1.0);
  CHECK_FALSE(d.has_labels());
}

TEST_CASE("label column") {
  const Dataset d = from_csv("0.5,3,1\n0.25,-1,2\n", 1);
  REQUIRE(d.has_labels());
  CHECK(d.d() == 2);
  CHECK(d.labels() == std::vector<int>{3, -1});
  CHECK(d.row(1)[1] == 2.0);
}

TEST_CASE("sparse line densified") {
  std::istringstream in("2 1:0.5 4:0.5\n");
  const Dataset d = parse_dataset(in, DataFormat::sparse_libsvm);
  CHECK(d.n() == 1);
  CHECK(d.d() == 4);
  CHECK(std::vector<double>(d.row(0).begin(), d.row(0).end()) ==
        std::vector<double>{0.5, 0, 0, 0.5});
  CHECK(d.labels() == std::vector<int>{2});
}

TEST_CASE("NaN names the offending line") {
  try {
    from_csv("1,2\n3,NaN\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(from_csv("1,2\n3,inf\n"), ParseError);
}

TEST_CASE("ragged rows and junk are rejected") {
  CHECK_THROWS_AS(from_csv("1,2\n3\n"), ParseError);
  CHECK_THROWS_AS(from_csv("1,x\n"), ParseError);
  CHECK_THROWS(from_csv(""));
}

TEST_CASE("distance examples") {
  CHECK(dist({1, 0}, {1, 0}, DistanceMeasure::cosine) == doctest::Approx(0.0));
  CHECK(dist({1, 2}, {4, 6}, DistanceMeasure::l1) == doctest::Approx(7.0));
  CHECK(dist({1, 2}, {4, 6}, DistanceMeasure::l2) == doctest::Approx(5.0));
  // 1 - Σ 2xy/(x+y) on (1,2,3)/6 and (2,1,1)/4 = 11/84.
  CHECK(dist({1, 2, 3}, {2, 1, 1}, DistanceMeasure::chi2) ==
        doctest::Approx(0.13095238095238093).epsilon(1e-12));
  CHECK(dist({1, 2, 3}, {2, 1, 1}, DistanceMeasure::js) ==
        doctest::Approx(0.09785481439986565).epsilon(1e-12));
  CHECK_THROWS(dist({1, 2}, {1, 2, 3}, DistanceMeasure::l2));
  CHECK_THROWS(dist({1, -2}, {1, 2}, DistanceMeasure::chi2));
  CHECK_THROWS(dist({1, -2}, {1, 2}, DistanceMeasure::js));
}

TEST_CASE("distance properties on random pairs") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (auto m : {DistanceMeasure::cosine, DistanceMeasure::l2, DistanceMeasure::l1,
                 DistanceMeasure::chi2, DistanceMeasure::js}) {
    CAPTURE(to_string(m));
    for (int t = 0; t < 200; ++t) {
      std::vector<double> x(9), y(9);
      for (auto& v : x) v = u(rng);
      for (auto& v : y) v = u(rng);
      if (t % 3 == 0) y[t % 9] = 0.0;
      const double dxy = distance(x, y, m);
      CHECK(dxy == doctest::Approx(distance(y, x, m)).epsilon(1e-12));
      CHECK(distance(x, x, m) == doctest::Approx(0.0).epsilon(1e-9));
      CHECK(dxy == doctest::Approx(oracle::naive_distance(x, y, m)).epsilon(1e-9));
      CHECK(dxy >= 0.0);
      if (m == DistanceMeasure::cosine) CHECK(dxy <= 2.0);
      if (is_histogram_measure(m)) CHECK(dxy <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("normalize_to_sphere") {
  const Dataset d(2, 2, {3, 4, 0.6, 0.8});
  const auto u = normalize_to_sphere(d);
  CHECK(u.row(0)[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(u.row(0)[1] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(std::fabs(u.row(1)[0] - 0.6) < 1e-9);
  CHECK(std::fabs(u.row(1)[1] - 0.8) < 1e-9);
  CHECK_THROWS(normalize_to_sphere(Dataset(2, 2, {1, 1, 0, 0})));
}

TEST_CASE("metric space matches direct distance") {
  const Dataset d(3, 3, {1, 2, 3, 2, 1, 1, 0, 5, 1});
  for (auto m : {DistanceMeasure::cosine, DistanceMeasure::l1, DistanceMeasure::chi2,
                 DistanceMeasure::js}) {
    const MetricSpace space(d, m);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        CHECK(space(i, j) == doctest::Approx(distance(d.row(i), d.row(j), m)).epsilon(1e-12));
      }
    }
  }
  CHECK_THROWS(MetricSpace(Dataset(1, 2, {-1, 2}), DistanceMeasure::chi2));
  CHECK_THROWS(MetricSpace(Dataset(1, 2, {0, 0}), DistanceMeasure::js));
}

TEST_CASE("measure and format names") {
  CHECK(parse_measure("chi2") == DistanceMeasure::chi2);
  CHECK(parse_measure("L2") == DistanceMeasure::l2);
  CHECK_THROWS(parse_measure("hamming"));
  CHECK(parse_format("sparse-libsvm") == DataFormat::sparse_libsvm);
}
