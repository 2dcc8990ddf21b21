#pragma once

#include <cstddef>
#include <cstdint>

#include "sdbscan/dataset.hpp"

namespace sdbscan {

/// Largest within-cluster and smallest between-cluster distance among the
/// labeled (non-noise) points. Any ε in [max_intra, min_inter) links every
/// cluster internally and never across clusters.
struct SeparationCertificate {
  double max_intra = 0.0;
  double min_inter = 0.0;

  bool separated() const { return min_inter > max_intra; }
  double midpoint() const { return 0.5 * (max_intra + min_inter); }
  // max_intra + t·(min_inter - max_intra)
  double inside_gap(double t) const { return max_intra + t * (min_inter - max_intra); }
};

SeparationCertificate certify_separation(const Dataset& data, DistanceMeasure measure);

struct SyntheticSet {
  Dataset data;
  SeparationCertificate certificate;
};

struct CapParams {
  std::size_t per_cluster = 100;
  std::size_t clusters = 2;
  std::size_t dim = 16;
  double cap_angle = 0.15;  // radians
  std::size_t noise = 0;
  std::uint64_t seed = 0;
};

/// Points on the unit sphere inside spherical caps around random centers
/// (pairwise center angle >= 3·cap_angle), plus uniform noise labeled -1.
/// Certificate is computed under cosine distance.
SyntheticSet spherical_caps(const CapParams& params);

struct BlobParams {
  std::size_t per_cluster = 100;
  std::size_t clusters = 2;
  std::size_t dim = 16;
  double spread = 1.0;        // per-coordinate standard deviation
  double center_scale = 10.0; // centers uniform in [0, center_scale]^d
  std::size_t noise = 0;
  bool non_negative = false;  // shift so every coordinate is >= 0 (χ²/JS)
  std::uint64_t seed = 0;
  DistanceMeasure certify_with = DistanceMeasure::l2;
};

/// Gaussian blobs in R^d for the L1/L2/χ²/JS paths.
SyntheticSet gaussian_blobs(const BlobParams& params);

}  // namespace sdbscan
