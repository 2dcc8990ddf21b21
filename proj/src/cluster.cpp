#include "sdbscan/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numeric>
#include <random>

#include "sdbscan/error.hpp"

namespace sdbscan {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::size_t ClusterLabels::noise_count() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kNoise));
}

ClusterLabels form_clusters(const CoreSet& core) {
  const std::size_t n = core.size();
  DisjointSets sets(n);
  for (std::size_t q = 0; q < n; ++q) {
    if (!core.is_core(q)) continue;
    for (const auto& nb : core.neighbors(q)) {
      if (core.is_core(nb.id)) sets.unite(q, nb.id);
    }
  }

  // Component root per point; border points borrow the root of the first
  // claiming core point in ascending id order.
  constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
  std::vector<std::size_t> root(n, kUnassigned);
  for (std::size_t q = 0; q < n; ++q) {
    if (!core.is_core(q)) continue;
    const std::size_t r = sets.find(q);
    root[q] = r;
    for (const auto& nb : core.neighbors(q)) {
      if (!core.is_core(nb.id) && root[nb.id] == kUnassigned) root[nb.id] = r;
    }
  }

  ClusterLabels out;
  out.labels.assign(n, kNoise);
  out.core.resize(n);
  std::vector<int> id_of_root(n, kNoise);
  for (std::size_t i = 0; i < n; ++i) {
    out.core[i] = core.is_core(i) ? 1 : 0;
    if (root[i] == kUnassigned) continue;
    int& id = id_of_root[root[i]];
    if (id == kNoise) id = out.num_clusters++;
    out.labels[i] = id;
  }
  return out;
}

NoiseLabeling label_noncore_1nn(const UnitVectorSet& data, const CeosIndex& index,
                                const ClusterLabels& labels, double sample_fraction,
                                std::uint64_t seed) {
  if (!(sample_fraction > 0.0) || sample_fraction > 1.0) {
    throw ConfigError("sample fraction must be in (0, 1]");
  }
  if (data.n != labels.labels.size() || data.n != index.num_points()) {
    throw ConfigError("1NN labeling: data, index and labels disagree on n");
  }
  NoiseLabeling result{labels, false, 0, 0};

  std::vector<std::uint32_t> core_points;
  for (std::size_t i = 0; i < data.n; ++i) {
    if (labels.core[i] && labels.labels[i] != kNoise) core_points.push_back(static_cast<std::uint32_t>(i));
  }
  if (core_points.empty()) return result;

  const auto wanted =
      static_cast<std::size_t>(std::ceil(sample_fraction * static_cast<double>(data.n)));
  std::vector<std::uint32_t> sample;
  std::mt19937_64 rng(seed);
  std::sample(core_points.begin(), core_points.end(), std::back_inserter(sample),
              std::min(wanted, core_points.size()), rng);
  result.applied = true;
  result.sampled = sample.size();

  const auto& transform = index.transform();
  const std::size_t D = transform.num_projections();
  std::vector<float> projections(sample.size() * D);
#pragma omp parallel
  {
    std::vector<float> scratch(transform.chain_size());
#pragma omp for schedule(static)
    for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(sample.size()); ++s) {
      const auto si = static_cast<std::size_t>(s);
      transform.project(data.row(sample[si]), std::span<float>(projections.data() + si * D, D),
                        scratch);
    }
  }

  std::vector<std::uint32_t> unlabeled;
  for (std::size_t i = 0; i < data.n; ++i) {
    if (labels.labels[i] == kNoise) unlabeled.push_back(static_cast<std::uint32_t>(i));
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t u = 0; u < static_cast<std::ptrdiff_t>(unlabeled.size()); ++u) {
    const std::size_t q = unlabeled[static_cast<std::size_t>(u)];
    double best = -std::numeric_limits<double>::infinity();
    std::uint32_t best_point = 0;
    for (std::size_t s = 0; s < sample.size(); ++s) {
      const double score = estimate_inner_product(
          std::span<const float>(projections.data() + s * D, D), index, q);
      if (score > best || (score == best && sample[s] < best_point)) {
        best = score;
        best_point = sample[s];
      }
    }
    result.labels.labels[q] = labels.labels[best_point];
  }
  result.relabeled = unlabeled.size();
  return result;
}

}  // namespace sdbscan
