#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sdbscan/ceos.hpp"
#include "sdbscan/dataset.hpp"
#include "sdbscan/neighbors.hpp"

namespace sdbscan {

inline constexpr int kNoise = -1;

/// Flat clustering: labels in 0..num_clusters-1, kNoise for noise.
struct ClusterLabels {
  std::vector<int> labels;
  int num_clusters = 0;
  std::vector<std::uint8_t> core;

  std::size_t noise_count() const;
};

/// Connected components of the core-point graph. Border points take the
/// label of the lowest-id core point whose neighborhood holds them. Cluster
/// ids are ordered by the smallest member point id.
ClusterLabels form_clusters(const CoreSet& core);

struct NoiseLabeling {
  ClusterLabels labels;
  bool applied = false;  // false when there were no core points to sample
  std::size_t relabeled = 0;
  std::size_t sampled = 0;
};

/// sDBSCAN-1NN: assigns every noise point the label of the sampled core point
/// with the largest estimated inner product. Samples ceil(fraction·n) core
/// points (at most all of them) uniformly; ties go to the lower point id.
NoiseLabeling label_noncore_1nn(const UnitVectorSet& data, const CeosIndex& index,
                                const ClusterLabels& labels, double sample_fraction,
                                std::uint64_t seed);

}  // namespace sdbscan
