#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "sdbscan/ceos.hpp"
#include "sdbscan/parallel.hpp"
#include "support/oracles.hpp"

using namespace sdbscan;

namespace {

UnitVectorSet random_sphere(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> v(n * d);
  for (auto& x : v) x = g(rng);
  return normalize_to_sphere(Dataset(n, d, std::move(v)));
}

std::vector<double> random_vector(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(d);
  for (auto& x : v) x = g(rng);
  return v;
}

double norm(const auto& v) {
  double s = 0;
  for (double x : v) s += static_cast<double>(x) * static_cast<double>(x);
  return std::sqrt(s);
}

// Stored projection table reproduced from the public transform.
std::vector<std::vector<float>> stored_table(const CeosIndex& index, const UnitVectorSet& data) {
  std::vector<std::vector<float>> t;
  for (std::size_t i = 0; i < data.n; ++i) {
    auto p = index.transform().project(data.row(i));
    for (auto& v : p) v *= index.transform().gaussian_scale();
    t.push_back(std::move(p));
  }
  return t;
}

void check_against_brute_force(const CeosIndex& index, const UnitVectorSet& data) {
  const std::size_t n = data.n, D = index.num_projections(), k = index.top_vectors();
  const auto table = stored_table(index, data);
  const auto dense = oracle::projection_table(index.transform(), data);
  const std::size_t len = std::min(index.top_points(), n);
  REQUIRE(index.list_length() == len);

  for (std::size_t v = 0; v < D; ++v) {
    std::vector<std::uint32_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0u);
    auto close = ids, far = ids;
    std::sort(close.begin(), close.end(), [&](auto a, auto b) {
      return table[a][v] > table[b][v] || (table[a][v] == table[b][v] && a < b);
    });
    std::sort(far.begin(), far.end(), [&](auto a, auto b) {
      return table[a][v] < table[b][v] || (table[a][v] == table[b][v] && a < b);
    });
    const auto cp = index.closest_points(v), fp = index.furthest_points(v);
    for (std::size_t i = 0; i < len; ++i) {
      CHECK(cp[i].id == close[i]);
      CHECK(fp[i].id == far[i]);
      CHECK(std::fabs(cp[i].value - dense[cp[i].id][v]) < 1e-4);
      CHECK(std::fabs(fp[i].value - dense[fp[i].id][v]) < 1e-4);
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    std::vector<std::uint32_t> ids(D);
    std::iota(ids.begin(), ids.end(), 0u);
    auto close = ids, far = ids;
    const auto& row = table[p];
    std::sort(close.begin(), close.end(),
              [&](auto a, auto b) { return row[a] > row[b] || (row[a] == row[b] && a < b); });
    std::sort(far.begin(), far.end(),
              [&](auto a, auto b) { return row[a] < row[b] || (row[a] == row[b] && a < b); });
    for (std::size_t i = 0; i < k; ++i) {
      CHECK(index.closest_vectors(p)[i] == close[i]);
      CHECK(index.furthest_vectors(p)[i] == far[i]);
    }
  }
}

}  // namespace

TEST_CASE("project equals the dense spinner matrix") {
  std::mt19937_64 rng(1);
  for (std::size_t D = 4; D <= 256; D *= 2) {
    for (std::size_t d : {D, D / 2 + 1, std::size_t{3}}) {
      CAPTURE(D);
      CAPTURE(d);
      const SpinnerTransform t(d, D, rng());
      const auto m = oracle::spinner_matrix(t);
      const auto x = random_vector(d, rng);
      const auto fast = t.project(x);
      const auto ref = oracle::apply(m, x);
      double err = 0;
      for (std::size_t i = 0; i < D; ++i) err = std::max(err, std::fabs(fast[i] - ref[i]));
      CHECK(err <= 1e-5 * std::max(1.0, norm(x)));
    }
  }
}

TEST_CASE("chain wider than D is truncated") {
  std::mt19937_64 rng(2);
  const SpinnerTransform t(100, 32, 5);
  CHECK(t.chain_size() == 128);
  const auto x = random_vector(100, rng);
  const auto fast = t.project(x);
  const auto ref = oracle::apply(oracle::spinner_matrix(t), x);
  REQUIRE(fast.size() == 32);
  for (std::size_t i = 0; i < 32; ++i) CHECK(std::fabs(fast[i] - ref[i]) < 1e-5 * norm(x));
}

TEST_CASE("norm preserved when D equals the padded dimension") {
  std::mt19937_64 rng(3);
  for (std::size_t D = 4; D <= 1024; D *= 2) {
    const SpinnerTransform t(D, D, rng());
    auto x = random_vector(D, rng);
    const double s = norm(x);
    for (auto& v : x) v /= s;
    CHECK(std::fabs(norm(t.project(x)) - 1.0) <= 1e-5);
  }
}

TEST_CASE("zero vector projects to zero") {
  const SpinnerTransform t(7, 16, 3);
  for (float v : t.project(std::vector<double>(7, 0.0))) CHECK(v == 0.0f);
}

TEST_CASE("e1 with all-ones signs") {
  std::array<std::vector<float>, 3> ones{std::vector<float>(4, 1.0f), std::vector<float>(4, 1.0f),
                                         std::vector<float>(4, 1.0f)};
  const SpinnerTransform t(4, 4, ones);
  const auto h = oracle::normalized_hadamard(4);
  const auto hhh = oracle::multiply(h, oracle::multiply(h, h));
  const auto p = t.project(std::vector<double>{1, 0, 0, 0});
  for (std::size_t i = 0; i < 4; ++i) CHECK(p[i] == doctest::Approx(hhh[i][0]).epsilon(1e-6));
}

TEST_CASE("construction errors") {
  CHECK_THROWS(SpinnerTransform(4, 12, 1));
  CHECK_THROWS(SpinnerTransform(4, 0, 1));
  CHECK_THROWS(SpinnerTransform(0, 8, 1));
  const auto data = random_sphere(3, 4, 1);
  CHECK_THROWS(build_index(data, {8, 0, 2, 1}));
  CHECK_THROWS(build_index(data, {8, 5, 2, 1}));
  CHECK_THROWS(build_index(data, {8, 2, 0, 1}));
  CHECK_NOTHROW(build_index(data, {8, 4, 2, 1}));
}

TEST_CASE("single point fills every list") {
  const auto data = random_sphere(1, 5, 4);
  const auto index = build_index(data, {16, 2, 3, 9});
  CHECK(index.list_length() == 1);
  for (std::size_t v = 0; v < 16; ++v) {
    CHECK(index.closest_points(v)[0].id == 0);
    CHECK(index.furthest_points(v)[0].id == 0);
  }
}

TEST_CASE("k = D/2 partitions the vectors") {
  const auto data = random_sphere(6, 10, 5);
  const auto index = build_index(data, {16, 8, 2, 3});
  for (std::size_t p = 0; p < 6; ++p) {
    std::set<std::uint32_t> all;
    for (auto v : index.closest_vectors(p)) all.insert(v);
    for (auto v : index.furthest_vectors(p)) all.insert(v);
    CHECK(all.size() == 16);
  }
}

TEST_CASE("five points, D=8, m=2 against brute force") {
  const auto data = random_sphere(5, 6, 6);
  check_against_brute_force(build_index(data, {8, 2, 2, 17}), data);
}

TEST_CASE("exhaustive small instances against brute force") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 1 + rng() % 64;
    const std::size_t D = std::size_t{2} << (rng() % 5);  // 2..32
    const std::size_t d = 1 + rng() % 40;
    const std::size_t k = 1 + rng() % (D / 2);
    const std::size_t m = 1 + rng() % 70;
    CAPTURE(n);
    CAPTURE(D);
    CAPTURE(d);
    const auto data = random_sphere(n, d, rng());
    check_against_brute_force(build_index(data, {D, k, m, rng()}), data);
  }
}

TEST_CASE("index independent of thread count") {
  const auto data = random_sphere(2500, 20, 8);  // spans several build blocks
  const IndexParams ip{256, 3, 40, 99};
  set_thread_count(1);
  const auto a = build_index(data, ip);
  set_thread_count(4);
  const auto b = build_index(data, ip);
  set_thread_count(0);
  bool same = true;
  for (std::size_t p = 0; p < data.n; ++p) {
    for (std::size_t i = 0; i < 3; ++i) {
      same &= a.closest_vectors(p)[i] == b.closest_vectors(p)[i];
      same &= a.furthest_vectors(p)[i] == b.furthest_vectors(p)[i];
    }
  }
  for (std::size_t v = 0; v < 256; ++v) {
    for (std::size_t i = 0; i < a.list_length(); ++i) {
      same &= a.closest_points(v)[i].id == b.closest_points(v)[i].id;
      same &= a.closest_points(v)[i].value == b.closest_points(v)[i].value;
      same &= a.furthest_points(v)[i].id == b.furthest_points(v)[i].id;
    }
  }
  CHECK(same);
}

TEST_CASE("estimator is positive on the query itself") {
  int positive = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto data = random_sphere(1, 32, 1000 + s);
    const auto index = build_index(data, {1024, 3, 1, s});
    positive += estimate_inner_product(index.transform().project(data.row(0)), index, 0) > 0;
  }
  CHECK(positive >= 99);
}

TEST_CASE("estimator is centred for orthogonal points") {
  std::vector<double> scores;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto data = random_sphere(1, 32, 2000 + s);
    const auto x = oracle::at_angle(data.row(0), 0.0, 3000 + s);
    const auto index = build_index(data, {1024, 3, 1, s});
    scores.push_back(estimate_inner_product(index.transform().project(x), index, 0));
  }
  const double mean = std::accumulate(scores.begin(), scores.end(), 0.0) / 100.0;
  double var = 0;
  for (double v : scores) var += (v - mean) * (v - mean);
  const double se = std::sqrt(var / 99.0) / 10.0;
  CHECK(std::fabs(mean / se) < 2.626);  // two-sided t, 99 dof, 1%
}

TEST_CASE("estimator ranks 0.9 above 0.1") {
  int correct = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto data = random_sphere(1, 32, 4000 + s);
    const auto hi = oracle::at_angle(data.row(0), 0.9, 5000 + s);
    const auto lo = oracle::at_angle(data.row(0), 0.1, 6000 + s);
    const auto index = build_index(data, {1024, 3, 1, s});
    correct += estimate_inner_product(index.transform().project(hi), index, 0) >
               estimate_inner_product(index.transform().project(lo), index, 0);
  }
  CHECK(correct >= 95);
}
