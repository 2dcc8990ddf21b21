#include "sdbscan/oracle.hpp"

#include "sdbscan/error.hpp"

namespace sdbscan {

ExactNeighborhoods exact_range(const MetricSpace& space, double eps) {
  if (eps < 0.0) throw ConfigError("eps must be non-negative");
  const std::size_t n = space.size();
  ExactNeighborhoods out(n);
  // Each row is computed independently (both halves of the symmetric
  // matrix) so rows can run in parallel without shared writes.
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t qi = 0; qi < static_cast<std::ptrdiff_t>(n); ++qi) {
    const auto q = static_cast<std::size_t>(qi);
    for (std::size_t x = 0; x < n; ++x) {
      if (x == q) continue;
      const double dist = space(q, x);
      if (dist <= eps) out[q].push_back({static_cast<std::uint32_t>(x), dist});
    }
  }
  return out;
}

ClusterLabels exact_dbscan(const MetricSpace& space, double eps, std::size_t min_pts) {
  return form_clusters(CoreSet::from_neighborhoods(exact_range(space, eps), min_pts));
}

ReachabilityOrdering exact_optics(const MetricSpace& space, double eps, std::size_t min_pts) {
  return run_soptics(CoreSet::from_neighborhoods(exact_range(space, eps), min_pts),
                     {eps, min_pts, space.measure()});
}

}  // namespace sdbscan
