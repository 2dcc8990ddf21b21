#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "sdbscan/cluster.hpp"
#include "sdbscan/dataset.hpp"
#include "sdbscan/neighbors.hpp"

#include "json.hpp"

namespace sdbscan {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct OrderingParams {
  double eps = 0.0;
  std::size_t min_pts = 0;
  DistanceMeasure measure = DistanceMeasure::cosine;
};

struct OrderingEntry {
  std::uint32_t id;
  double reach;
  double core_dist;
};

/// OPTICS cluster ordering: every point exactly once, in processing order.
struct ReachabilityOrdering {
  OrderingParams params;
  std::vector<OrderingEntry> entries;
};

/// Min-queue of (key, point) with lazy deletion: a point may be queued many
/// times; entries of already-processed points are skipped on pop. Equal keys
/// pop the lower point id first.
class PendingQueue {
 public:
  void push(std::uint32_t point, double key) { heap_.push({key, point}); }

  // Smallest entry whose point is not yet processed, or nullopt when empty.
  std::optional<std::pair<std::uint32_t, double>> pop(const std::vector<std::uint8_t>& processed);

  bool empty() const { return heap_.empty(); }

 private:
  struct Item {
    double key;
    std::uint32_t point;
    bool operator>(const Item& o) const {
      return key > o.key || (key == o.key && point > o.point);
    }
  };
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap_;
};

/// minPts-th smallest cached neighbor distance of a core point; +inf if non-core.
/// With approximate neighborhoods this is an upper bound of the exact value.
double core_dist(const CoreSet& core, std::size_t q);

/// max(core_dist(q), dist(x, q)); +inf if q is non-core. Throws when x is not
/// in q's cached neighborhood.
double reach_dist(const CoreSet& core, std::size_t x, std::size_t q);

/// OPTICS over the given neighborhoods. Outer loop in ascending id order;
/// reachability recorded at pop time.
ReachabilityOrdering run_soptics(const CoreSet& core, const OrderingParams& params);

/// Flat clustering at eps_cut <= params.eps: a point whose reachability
/// exceeds eps_cut starts a new cluster if its core distance is within
/// eps_cut and is noise otherwise; every other point joins the current cluster.
ClusterLabels extract_eps_cut(const ReachabilityOrdering& ordering, double eps_cut);

// {"params": {...}, "entries": [{"order", "id", "reach", "core"}]}, +inf as null.
nlohmann::json to_json(const ReachabilityOrdering& ordering);
ReachabilityOrdering ordering_from_json(const nlohmann::json& doc);
// order,id,reach,core with the literal "inf".
void write_ordering_csv(std::ostream& out, const ReachabilityOrdering& ordering);

}  // namespace sdbscan
