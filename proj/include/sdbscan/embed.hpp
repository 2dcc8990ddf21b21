#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sdbscan/dataset.hpp"

namespace sdbscan {

/// Parameters of a random kernel feature map.
///
/// For L2 (Gaussian kernel) and L1 (Laplacian kernel) `d_prime` is the number
/// of random frequencies and the output has 2·d_prime coordinates. For χ² and
/// JS the map is the deterministic homogeneous kernel map and `d_prime` must
/// equal (2l+1)·input_dim for an integer order l >= 1.
struct EmbeddingConfig {
  DistanceMeasure measure = DistanceMeasure::l2;
  std::size_t input_dim = 0;
  std::size_t d_prime = 1024;
  double sigma = 1.0;
  double sampling_interval = 0.4;
  std::uint64_t seed = 0;
};

class FeatureMap {
 public:
  const EmbeddingConfig& config() const { return config_; }
  DistanceMeasure measure() const { return config_.measure; }
  std::size_t input_dim() const { return config_.input_dim; }
  std::size_t output_dim() const;

  // Homogeneous-map order l (χ²/JS only).
  std::size_t order() const { return order_; }

  // d_prime × input_dim frequency matrix (L1/L2 only, row-major).
  const std::vector<double>& frequencies() const { return frequencies_; }

  // Unit-norm embedding of `x` into `out` (size output_dim()).
  void apply(std::span<const double> x, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> x) const;

  // Raw homogeneous features before the final L2 normalization; exposed so the
  // sampled-spectrum approximation can be tested on its own.
  std::vector<double> homogeneous_features(std::span<const double> x) const;

 private:
  friend FeatureMap build_feature_map(const EmbeddingConfig& config);

  EmbeddingConfig config_;
  std::size_t order_ = 0;
  std::vector<double> frequencies_;
  // Homogeneous map: L·κ(0) and 2·L·κ(rL) for r = 1..l.
  std::vector<double> spectrum_weights_;
};

FeatureMap build_feature_map(const EmbeddingConfig& config);

/// Embeds every point with `map`; parallel over points.
UnitVectorSet embed_dataset(const FeatureMap& map, const Dataset& data);

/// Cosine-space threshold equivalent to the original-space `eps`:
/// 1 - K at distance eps (identity for cosine, χ², JS).
double embedded_epsilon(double eps, const FeatureMap& map);

// Exact kernel values, used as oracles and by embedded_epsilon.
double gaussian_kernel(std::span<const double> x, std::span<const double> y, double sigma);
double laplacian_kernel(std::span<const double> x, std::span<const double> y, double sigma);

// Spectrum κ(λ) of the additive χ² and JS kernels.
double chi2_spectrum(double lambda);
double js_spectrum(double lambda);

}  // namespace sdbscan
