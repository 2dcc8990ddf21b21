#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sdbscan/dataset.hpp"

namespace sdbscan {

/// Structured spinner H·D3·H·D2·H·D1 simulating D Gaussian projections in
/// O(N log N), N = max(D, next_pow2(input_dim)). Each H is the normalized
/// Hadamard matrix (scaled by 1/√N), so the chain is orthogonal; when
/// N > D only the first D outputs are kept.
class SpinnerTransform {
 public:
  SpinnerTransform(std::size_t input_dim, std::size_t num_projections, std::uint64_t seed);
  // Explicit ±1 sign diagonals, each of length chain_size().
  SpinnerTransform(std::size_t input_dim, std::size_t num_projections,
                   std::array<std::vector<float>, 3> signs);

  std::size_t input_dim() const { return input_dim_; }
  std::size_t num_projections() const { return num_projections_; }
  std::size_t chain_size() const { return chain_size_; }
  const std::vector<float>& signs(std::size_t layer) const { return signs_[layer]; }

  // Multiplier that turns the normalized outputs into N(0,1)-scaled
  // projections x·r_i with ‖r_i‖ ≈ √N.
  float gaussian_scale() const;

  // `out` receives num_projections() values; `scratch` needs chain_size().
  void project(std::span<const double> x, std::span<float> out, std::span<float> scratch) const;
  std::vector<float> project(std::span<const double> x) const;

 private:
  void validate() const;

  std::size_t input_dim_;
  std::size_t num_projections_;
  std::size_t chain_size_;
  std::array<std::vector<float>, 3> signs_;
};

struct IndexParams {
  std::size_t num_projections = 1024;  // D
  std::size_t top_vectors = 5;         // k
  std::size_t top_points = 50;         // m
  std::uint64_t seed = 0;
};

struct ProjectedPoint {
  std::uint32_t id;
  float value;  // Gaussian-scaled projection
};

/// Per-point extreme vectors and per-vector extreme points.
///
/// closest_vectors(q): k vector ids with the largest q·r, descending.
/// furthest_vectors(q): k vector ids with the most negative q·r, ascending.
/// closest_points(r): up to m points with the largest x·r, descending.
/// furthest_points(r): up to m points with the smallest x·r, ascending.
/// Ties go to the lower id.
class CeosIndex {
 public:
  CeosIndex(SpinnerTransform transform, std::size_t num_points, std::size_t k, std::size_t m);

  const SpinnerTransform& transform() const { return transform_; }
  std::size_t num_points() const { return num_points_; }
  std::size_t num_projections() const { return transform_.num_projections(); }
  std::size_t top_vectors() const { return k_; }
  std::size_t top_points() const { return m_; }
  std::size_t list_length() const { return list_len_; }

  std::span<const std::uint32_t> closest_vectors(std::size_t point) const {
    return {point_vectors_.data() + point * 2 * k_, k_};
  }
  std::span<const std::uint32_t> furthest_vectors(std::size_t point) const {
    return {point_vectors_.data() + point * 2 * k_ + k_, k_};
  }
  std::span<const ProjectedPoint> closest_points(std::size_t vec) const {
    return {vector_points_.data() + vec * 2 * list_len_, list_len_};
  }
  std::span<const ProjectedPoint> furthest_points(std::size_t vec) const {
    return {vector_points_.data() + vec * 2 * list_len_ + list_len_, list_len_};
  }

 private:
  friend CeosIndex build_index(const UnitVectorSet& data, const IndexParams& params);

  SpinnerTransform transform_;
  std::size_t num_points_;
  std::size_t k_;
  std::size_t m_;
  std::size_t list_len_;
  std::vector<std::uint32_t> point_vectors_;
  std::vector<ProjectedPoint> vector_points_;
};

/// Builds the index. Parallel over points for projection and over vectors for
/// top-m selection; output is independent of the worker count.
CeosIndex build_index(const UnitVectorSet& data, const IndexParams& params);

/// Un-calibrated estimate of x·q: Σ over q's closest vectors of x·r minus Σ
/// over q's furthest vectors of x·r. Only meaningful for comparisons.
double estimate_inner_product(std::span<const float> x_projections, const CeosIndex& index,
                              std::size_t q);

}  // namespace sdbscan
