#include <random>
#include <vector>

#include "doctest.h"
#include "sdbscan/eval.hpp"
#include "support/oracles.hpp"

using sdbscan::nmi;

TEST_CASE("nmi examples") {
  const std::vector<int> a = {0, 0, 1, 1, 2, 2};
  CHECK(nmi(a, a) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(nmi(std::vector<int>{3, 3, 3, 3}, std::vector<int>{0, 1, 0, 1}) == 0.0);
  CHECK(std::fabs(nmi(std::vector<int>{0, 0, 1, 1}, std::vector<int>{0, 1, 1, 1}) -
                  0.3437110184854508) <= 1e-9);
}

TEST_CASE("nmi edge cases") {
  CHECK_THROWS(nmi(std::vector<int>{0, 1}, std::vector<int>{0}));
  CHECK(nmi(std::vector<int>{}, std::vector<int>{}) == 0.0);
  CHECK(nmi(std::vector<int>{-1, -1, 0, 0}, std::vector<int>{5, 5, 7, 7}) ==
        doctest::Approx(1.0));
}

TEST_CASE("nmi properties on random labelings") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng() % 50;
    const int ka = 1 + static_cast<int>(rng() % 5), kb = 1 + static_cast<int>(rng() % 5);
    std::vector<int> a(n), b(n), pa(n);
    for (auto& x : a) x = static_cast<int>(rng() % ka) - 1;
    for (auto& x : b) x = static_cast<int>(rng() % kb) - 1;
    for (std::size_t i = 0; i < n; ++i) pa[i] = 100 - 3 * a[i];
    const double v = nmi(a, b);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 + 1e-12);
    CHECK(v == doctest::Approx(nmi(b, a)).epsilon(1e-12));
    CHECK(v == doctest::Approx(nmi(pa, b)).epsilon(1e-12));
    CHECK(v == doctest::Approx(oracle::reference_nmi(a, b)).epsilon(1e-9));
  }
}

TEST_CASE("report json") {
  sdbscan::RunReport r;
  r.algorithm = "sdbscan";
  r.num_clusters = 2;
  r.params = {{"eps", 0.1}};
  auto j = to_json(r);
  CHECK(j["nmi"].is_null());
  CHECK(j["num_clusters"] == 2);
  CHECK(j["params"]["eps"] == 0.1);
  r.nmi = 0.5;
  CHECK(to_json(r)["nmi"] == 0.5);
}
