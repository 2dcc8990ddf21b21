#include "sdbscan/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sdbscan/error.hpp"

namespace sdbscan {

std::string_view to_string(ThresholdForm form) {
  return form == ThresholdForm::one_minus_eps ? "one-minus-eps" : "one-minus-eps-sq-over-2";
}

ThresholdForm parse_threshold_form(std::string_view name) {
  if (name == "one-minus-eps") return ThresholdForm::one_minus_eps;
  if (name == "one-minus-eps-sq-over-2") return ThresholdForm::one_minus_eps_sq_over_2;
  throw ConfigError("unknown adaptive threshold form '" + std::string(name) + "'");
}

CoreSet CoreSet::from_neighborhoods(std::vector<std::vector<Neighbor>> neighborhoods,
                                    std::size_t min_pts) {
  if (min_pts == 0) throw ConfigError("min_pts must be >= 1");
  CoreSet set;
  set.min_pts_ = min_pts;
  set.neighborhoods_ = std::move(neighborhoods);
  set.core_.assign(set.neighborhoods_.size(), 0);
  const auto n = static_cast<std::ptrdiff_t>(set.neighborhoods_.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto& list = set.neighborhoods_[static_cast<std::size_t>(i)];
    std::stable_sort(list.begin(), list.end(),
                     [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });
    list.erase(std::unique(list.begin(), list.end(),
                           [](const Neighbor& a, const Neighbor& b) { return a.id == b.id; }),
               list.end());
    std::erase_if(list, [i](const Neighbor& nb) { return nb.id == static_cast<std::uint32_t>(i); });
    set.core_[static_cast<std::size_t>(i)] = list.size() >= min_pts ? 1 : 0;
  }
  return set;
}

std::size_t CoreSet::num_core() const {
  return static_cast<std::size_t>(std::count(core_.begin(), core_.end(), 1));
}

const Neighbor* CoreSet::find(std::size_t q, std::size_t x) const {
  const auto& list = neighborhoods_[q];
  const auto it = std::lower_bound(list.begin(), list.end(), x,
                                   [](const Neighbor& nb, std::size_t id) { return nb.id < id; });
  return it != list.end() && it->id == x ? &*it : nullptr;
}

double adaptive_threshold(const NeighborhoodParams& params, std::size_t num_projections) {
  const double eps = params.index_eps >= 0.0 ? params.index_eps : params.eps;
  const double tau = params.threshold_form == ThresholdForm::one_minus_eps ? 1.0 - eps
                                                                           : 1.0 - eps * eps / 2.0;
  if (tau <= 0.0) {
    throw ConfigError("adaptive threshold is not positive (eps = " + std::to_string(eps) +
                      " is too large for adaptive mode)");
  }
  return tau * std::sqrt(2.0 * std::log(static_cast<double>(num_projections)));
}

std::vector<std::uint32_t> gather_candidates(const CeosIndex& index, std::size_t q,
                                             const NeighborhoodParams& params) {
  std::vector<std::uint32_t> out;
  if (params.mode == CandidateMode::fixed_m) {
    const std::size_t m = index.list_length();
    out.reserve(2 * index.top_vectors() * m);
    for (const auto v : index.closest_vectors(q)) {
      for (const auto& p : index.closest_points(v).first(m)) out.push_back(p.id);
    }
    for (const auto v : index.furthest_vectors(q)) {
      for (const auto& p : index.furthest_points(v).first(m)) out.push_back(p.id);
    }
  } else {
    const double threshold = adaptive_threshold(params, index.num_projections());
    const std::size_t cap = std::min(params.effective_cap(), index.list_length());
    for (const auto v : index.closest_vectors(q)) {
      for (const auto& p : index.closest_points(v).first(cap)) {
        if (p.value < threshold) break;
        out.push_back(p.id);
      }
    }
    for (const auto v : index.furthest_vectors(q)) {
      for (const auto& p : index.furthest_points(v).first(cap)) {
        if (p.value > -threshold) break;
        out.push_back(p.id);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::erase(out, static_cast<std::uint32_t>(q));
  return out;
}

namespace {

CoreSet verify_candidates(const MetricSpace& space, const CeosIndex& index,
                          const NeighborhoodParams& params) {
  if (!(params.eps > 0.0)) throw ConfigError("eps must be positive");
  if (params.min_pts == 0) throw ConfigError("min_pts must be >= 1");
  if (space.size() != index.num_points()) throw ConfigError("index/data size mismatch");
  if (params.mode == CandidateMode::adaptive) {
    adaptive_threshold(params, index.num_projections());  // validates τ before the parallel loop
  }

  const std::size_t n = space.size();
  std::vector<std::vector<Neighbor>> hits(n);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t qi = 0; qi < static_cast<std::ptrdiff_t>(n); ++qi) {
    const auto q = static_cast<std::size_t>(qi);
    for (const auto x : gather_candidates(index, q, params)) {
      const double dist = space(q, x);
      if (dist <= params.eps) hits[q].push_back({x, dist});
    }
  }

  // Bidirectional insert, merged in point order.
  std::vector<std::size_t> sizes(n, 0);
  for (std::size_t q = 0; q < n; ++q) {
    sizes[q] += hits[q].size();
    for (const auto& h : hits[q]) ++sizes[h.id];
  }
  std::vector<std::vector<Neighbor>> neighborhoods(n);
  for (std::size_t q = 0; q < n; ++q) neighborhoods[q].reserve(sizes[q]);
  for (std::size_t q = 0; q < n; ++q) {
    for (const auto& h : hits[q]) {
      neighborhoods[q].push_back(h);
      neighborhoods[h.id].push_back({static_cast<std::uint32_t>(q), h.dist});
    }
    std::vector<Neighbor>().swap(hits[q]);
  }
  return CoreSet::from_neighborhoods(std::move(neighborhoods), params.min_pts);
}

}  // namespace

CoreSet find_core_points(const MetricSpace& space, const CeosIndex& index,
                         const NeighborhoodParams& params) {
  NeighborhoodParams fixed = params;
  fixed.mode = CandidateMode::fixed_m;
  return verify_candidates(space, index, fixed);
}

CoreSet find_core_points_adaptive(const MetricSpace& space, const CeosIndex& index,
                                  const NeighborhoodParams& params) {
  NeighborhoodParams adaptive = params;
  adaptive.mode = CandidateMode::adaptive;
  return verify_candidates(space, index, adaptive);
}

}  // namespace sdbscan
