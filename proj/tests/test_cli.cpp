#include <unistd.h>
#include <sys/wait.h>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "sdbscan/eval.hpp"
#include "sdbscan/labels_io.hpp"
#include "sdbscan/optics.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("sdbscan_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args, const std::string& log = "log.txt") {
  const std::string cmd = std::string(SDBSCAN_CLI_PATH) + " " + args + " > " +
                          (workdir() / log).string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

// Two-cap CSV (label in column 16) shared by the cases below.
const std::string& two_cap_csv() {
  static const std::string p = [] {
    const std::string out = path("caps.csv");
    REQUIRE(run("synth --clusters 2 --per-cluster 100 --dim 16 --seed 1 --out " + out +
                " --report " + path("synth.json")) == 0);
    return out;
  }();
  return p;
}

}  // namespace

TEST_CASE("sdbscan on the two-cap CSV finds two clusters") {
  REQUIRE(run("sdbscan --data " + two_cap_csv() +
              " --label-column 16 --eps 0.11 --min-pts 50 --dist cosine --out " +
              path("labels.csv") + " --report " + path("report.json")) == 0);
  const auto report = nlohmann::json::parse(slurp(path("report.json")));
  CHECK(report["num_clusters"] == 2);
  CHECK(report["nmi"].get<double>() == doctest::Approx(1.0));
  CHECK(report["params"]["top_points"] == 50);
  CHECK(report["params"]["sigma"] == doctest::Approx(0.22));
  const auto labels = sdbscan::read_labels_csv(fs::path(path("labels.csv")));
  CHECK(labels.size() == 200);
}

TEST_CASE("soptics then extract matches sdbscan") {
  const auto cert = nlohmann::json::parse(slurp(path("synth.json")))["params"]["certificate"];
  const double gap = 0.5 * (cert["max_intra"].get<double>() + cert["min_inter"].get<double>());
  const std::string eps = std::to_string(gap);
  REQUIRE(run("sdbscan --data " + two_cap_csv() + " --label-column 16 --eps " + eps +
              " --min-pts 10 --top-vectors 3 --out " + path("a.csv") + " --report " +
              path("r1.json")) == 0);
  REQUIRE(run("soptics --data " + two_cap_csv() + " --label-column 16 --eps " + eps +
              " --min-pts 10 --top-vectors 3 --out " + path("o.json") + " --report " +
              path("r2.json")) == 0);
  REQUIRE(run("extract --ordering " + path("o.json") + " --eps-cut " + eps + " --out " +
              path("b.csv") + " --report " + path("r3.json")) == 0);
  const auto a = sdbscan::read_labels_csv(fs::path(path("a.csv")));
  const auto b = sdbscan::read_labels_csv(fs::path(path("b.csv")));
  CHECK(oracle::same_partition(a, b));
  CHECK(nlohmann::json::parse(slurp(path("r3.json")))["num_clusters"] == 2);
}

TEST_CASE("missing eps is a usage error") {
  CHECK(run("sdbscan --data " + two_cap_csv()) != 0);
  CHECK(slurp(path("log.txt")).find("--eps") != std::string::npos);
  CHECK(run("sdbscan --data /nonexistent.csv --eps 0.1") != 0);
  CHECK(run("bogus") != 0);
  CHECK(run("sdbscan --data " + two_cap_csv() + " --eps 0.1 --projections 1000") != 0);
}

TEST_CASE("outputs are byte-identical across thread counts") {
  for (const std::string cmd : {"sdbscan", "soptics", "exact-dbscan", "exact-optics"}) {
    CAPTURE(cmd);
    const std::string ext = cmd.find("optics") != std::string::npos ? ".json" : ".csv";
    for (int t : {1, 4}) {
      REQUIRE(run(cmd + " --data " + two_cap_csv() +
                  " --label-column 16 --eps 0.3 --min-pts 10 --threads " + std::to_string(t) +
                  " --out " + path("t" + std::to_string(t) + ext) + " --report " +
                  path("rt.json")) == 0);
    }
    const auto one = slurp(path("t1" + ext));
    CHECK(!one.empty());
    CHECK(one == slurp(path("t4" + ext)));
  }
}

TEST_CASE("config fragment supplies eps, min_pts and dist") {
  {
    std::ofstream f(path("frag.json"));
    f << R"({"eps": 0.3, "min_pts": 10, "dist": "cosine"})";
  }
  REQUIRE(run("sdbscan --data " + two_cap_csv() + " --label-column 16 --config " +
              path("frag.json") + " --report " + path("rf.json")) == 0);
  const auto r = nlohmann::json::parse(slurp(path("rf.json")));
  CHECK(r["params"]["eps"] == 0.3);
  CHECK(r["params"]["min_pts"] == 10);
  // Explicit flags win over the fragment.
  REQUIRE(run("sdbscan --data " + two_cap_csv() + " --label-column 16 --config " +
              path("frag.json") + " --min-pts 12 --report " + path("rf.json")) == 0);
  CHECK(nlohmann::json::parse(slurp(path("rf.json")))["params"]["min_pts"] == 12);
}

TEST_CASE("eval and CSV ordering output") {
  REQUIRE(run("exact-dbscan --data " + two_cap_csv() +
              " --label-column 16 --eps 0.3 --min-pts 10 --out " + path("e.csv") +
              " --report " + path("re.json")) == 0);
  {
    std::ofstream truth(path("truth.csv"));
    std::vector<int> t(200);
    for (int i = 0; i < 200; ++i) t[i] = i < 100 ? 0 : 1;
    sdbscan::write_labels_csv(truth, t);
  }
  REQUIRE(run("eval --labels " + path("e.csv") + " --truth " + path("truth.csv") + " --report " +
              path("rv.json")) == 0);
  const double v = nlohmann::json::parse(slurp(path("rv.json")))["nmi"];
  const double direct = nlohmann::json::parse(slurp(path("re.json")))["nmi"];
  CHECK(v == doctest::Approx(direct));
  REQUIRE(run("exact-optics --data " + two_cap_csv() +
              " --label-column 16 --eps 0.3 --min-pts 10 --out " + path("o.csv") + " --report " +
              path("ro.json")) == 0);
  CHECK(slurp(path("o.csv")).rfind("order,id,reach,core\n0,0,inf,", 0) == 0);
}

TEST_CASE("non-cosine measures run end to end") {
  sdbscan::BlobParams p;
  p.non_negative = true;
  p.dim = 8;
  p.per_cluster = 60;
  p.center_scale = 30.0;
  for (auto m : {sdbscan::DistanceMeasure::l2, sdbscan::DistanceMeasure::l1,
                 sdbscan::DistanceMeasure::chi2, sdbscan::DistanceMeasure::js}) {
    p.certify_with = m;
    const auto s = sdbscan::gaussian_blobs(p);
    REQUIRE(s.certificate.separated());
    {
      std::ofstream f(path("blobs.csv"));
      sdbscan::write_dataset_csv(f, s.data);
    }
    const std::string name(sdbscan::to_string(m));
    CAPTURE(name);
    REQUIRE(run("sdbscan --data " + path("blobs.csv") + " --label-column 8 --dist " + name +
                " --eps " + std::to_string(s.certificate.midpoint()) +
                " --min-pts 5 --top-points 20" +
                (sdbscan::is_histogram_measure(m) ? "" : " --kernel-features 512") + " --report " +
                path("rb.json")) == 0);
    const auto r = nlohmann::json::parse(slurp(path("rb.json")));
    CHECK(r["num_clusters"] == 2);
    CHECK(r["nmi"].get<double>() >= 0.95);
  }
}

TEST_CASE("golden eps-cut fixtures") {
  const fs::path dir = SDBSCAN_FIXTURE_DIR;
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  REQUIRE(manifest.size() == 3);
  for (const auto& f : manifest) {
    CAPTURE(f["name"].get<std::string>());
    const auto ordering =
        sdbscan::ordering_from_json(nlohmann::json::parse(slurp(dir / f["ordering"].get<std::string>())));
    const auto expected = sdbscan::read_labels_csv(dir / f["labels"].get<std::string>());
    const auto got = sdbscan::extract_eps_cut(ordering, f["eps_cut"].get<double>());
    CHECK(got.labels == expected);
    CHECK(got.num_clusters == f["clusters"].get<int>());
    CHECK(to_json(ordering) == nlohmann::json::parse(slurp(dir / f["ordering"].get<std::string>())));
    // The explorer's exported fragment for this cut.
    const nlohmann::json fragment = {{"eps", f["eps_cut"]},
                                     {"min_pts", ordering.params.min_pts},
                                     {"dist", std::string(to_string(ordering.params.measure))}};
    CHECK(fragment == f["config"]);
  }
}
