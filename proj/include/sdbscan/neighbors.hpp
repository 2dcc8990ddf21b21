#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sdbscan/ceos.hpp"
#include "sdbscan/dataset.hpp"

namespace sdbscan {

enum class CandidateMode { fixed_m, adaptive };

// Adaptive-mode threshold on the index side: τ·√(2 ln D).
enum class ThresholdForm {
  one_minus_eps,            // τ = 1 - ε
  one_minus_eps_sq_over_2,  // τ = 1 - ε²/2
};

std::string_view to_string(ThresholdForm form);
ThresholdForm parse_threshold_form(std::string_view name);

struct NeighborhoodParams {
  double eps = 0.0;
  std::size_t min_pts = 50;
  CandidateMode mode = CandidateMode::fixed_m;
  ThresholdForm threshold_form = ThresholdForm::one_minus_eps;
  // Cosine-space ε for the adaptive threshold; negative means "use eps".
  double index_eps = -1.0;
  // Hard limit of adaptive candidates per vector side; 0 means 8·min_pts.
  std::size_t candidate_cap = 0;

  std::size_t effective_cap() const { return candidate_cap == 0 ? 8 * min_pts : candidate_cap; }
};

struct Neighbor {
  std::uint32_t id;
  double dist;
};

/// Core flags plus (approximate or exact) ε-neighborhoods with verified
/// distances. Neighborhoods are sorted by id and never contain the point
/// itself; a point is core iff its neighborhood has at least min_pts entries.
class CoreSet {
 public:
  CoreSet() = default;
  // Takes raw per-point lists; sorts them and drops duplicate ids.
  static CoreSet from_neighborhoods(std::vector<std::vector<Neighbor>> neighborhoods,
                                    std::size_t min_pts);

  std::size_t size() const { return neighborhoods_.size(); }
  std::size_t min_pts() const { return min_pts_; }
  bool is_core(std::size_t point) const { return core_[point] != 0; }
  std::size_t num_core() const;
  std::span<const Neighbor> neighbors(std::size_t point) const { return neighborhoods_[point]; }

  // Cached dist(x, q) for x in q's neighborhood; nullptr when absent.
  const Neighbor* find(std::size_t q, std::size_t x) const;

 private:
  std::vector<std::vector<Neighbor>> neighborhoods_;
  std::vector<std::uint8_t> core_;
  std::size_t min_pts_ = 0;
};

/// Candidates examined for query point q: the stored points of q's extreme
/// vectors, deduplicated, ascending, without q itself.
std::vector<std::uint32_t> gather_candidates(const CeosIndex& index, std::size_t q,
                                             const NeighborhoodParams& params);

/// Adaptive-mode projection threshold τ·√(2 ln D); throws when τ <= 0.
double adaptive_threshold(const NeighborhoodParams& params, std::size_t num_projections);

/// Verifies every candidate against the original-space distance and inserts
/// hits in both directions. Parallel over query points; deterministic.
CoreSet find_core_points(const MetricSpace& space, const CeosIndex& index,
                         const NeighborhoodParams& params);

/// Same as find_core_points with the adaptive candidate sets S_i / R_i.
CoreSet find_core_points_adaptive(const MetricSpace& space, const CeosIndex& index,
                                  const NeighborhoodParams& params);

}  // namespace sdbscan
