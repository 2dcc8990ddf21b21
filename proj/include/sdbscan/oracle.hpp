#pragma once

#include <vector>

#include "sdbscan/cluster.hpp"
#include "sdbscan/dataset.hpp"
#include "sdbscan/neighbors.hpp"
#include "sdbscan/optics.hpp"

namespace sdbscan {

/// Full ε-neighborhoods by exhaustive pairwise distance (self excluded,
/// boundary inclusive), sorted by id.
using ExactNeighborhoods = std::vector<std::vector<Neighbor>>;

ExactNeighborhoods exact_range(const MetricSpace& space, double eps);

ClusterLabels exact_dbscan(const MetricSpace& space, double eps, std::size_t min_pts);

ReachabilityOrdering exact_optics(const MetricSpace& space, double eps, std::size_t min_pts);

}  // namespace sdbscan
