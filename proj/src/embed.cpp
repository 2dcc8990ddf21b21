#include "sdbscan/embed.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "sdbscan/error.hpp"
#include "sdbscan/simd/kernels.hpp"

namespace sdbscan {
namespace {

bool is_fourier(DistanceMeasure m) { return m == DistanceMeasure::l1 || m == DistanceMeasure::l2; }

double sech(double v) { return 1.0 / std::cosh(v); }

}  // namespace

double chi2_spectrum(double lambda) { return sech(std::numbers::pi * lambda); }

double js_spectrum(double lambda) {
  return (2.0 / std::log(4.0)) * sech(std::numbers::pi * lambda) / (1.0 + 4.0 * lambda * lambda);
}

double gaussian_kernel(std::span<const double> x, std::span<const double> y, double sigma) {
  const double sq = simd::kernels().l2_squared(x.data(), y.data(), x.size());
  return std::exp(-sq / (2.0 * sigma * sigma));
}

double laplacian_kernel(std::span<const double> x, std::span<const double> y, double sigma) {
  return std::exp(-simd::kernels().l1(x.data(), y.data(), x.size()) / sigma);
}

std::size_t FeatureMap::output_dim() const {
  return is_fourier(config_.measure) ? 2 * config_.d_prime : config_.d_prime;
}

FeatureMap build_feature_map(const EmbeddingConfig& config) {
  if (config.input_dim == 0) throw ConfigError("feature map needs input_dim >= 1");
  if (config.d_prime == 0) throw ConfigError("feature map needs d_prime >= 1");

  FeatureMap map;
  map.config_ = config;
  switch (config.measure) {
    case DistanceMeasure::cosine:
      throw ConfigError("cosine distance needs no feature map");
    case DistanceMeasure::l1:
    case DistanceMeasure::l2: {
      if (!(config.sigma > 0.0) || !std::isfinite(config.sigma)) {
        throw ConfigError("kernel scale sigma must be positive");
      }
      std::mt19937_64 rng(config.seed);
      map.frequencies_.resize(config.d_prime * config.input_dim);
      const double inv_sigma = 1.0 / config.sigma;
      // Bochner: the Gaussian kernel has Gaussian spectrum, the Laplacian
      // (L1) kernel has a product of Cauchy spectra.
      if (config.measure == DistanceMeasure::l2) {
        std::normal_distribution<double> dist(0.0, 1.0);
        for (double& w : map.frequencies_) w = dist(rng) * inv_sigma;
      } else {
        std::cauchy_distribution<double> dist(0.0, 1.0);
        for (double& w : map.frequencies_) w = dist(rng) * inv_sigma;
      }
      break;
    }
    case DistanceMeasure::chi2:
    case DistanceMeasure::js: {
      if (!(config.sampling_interval > 0.0)) {
        throw ConfigError("sampling interval must be positive");
      }
      const std::size_t d = config.input_dim;
      if (config.d_prime % d != 0 || (config.d_prime / d) % 2 == 0 || config.d_prime / d < 3) {
        throw ConfigError("d_prime must be (2l+1)*d with l >= 1 for chi2/js (d = " +
                          std::to_string(d) + ")");
      }
      map.order_ = (config.d_prime / d - 1) / 2;
      const auto kappa = config.measure == DistanceMeasure::chi2 ? chi2_spectrum : js_spectrum;
      const double step = config.sampling_interval;
      map.spectrum_weights_.push_back(step * kappa(0.0));
      for (std::size_t r = 1; r <= map.order_; ++r) {
        map.spectrum_weights_.push_back(2.0 * step * kappa(static_cast<double>(r) * step));
      }
      break;
    }
  }
  return map;
}

std::vector<double> FeatureMap::homogeneous_features(std::span<const double> x) const {
  if (x.size() != config_.input_dim) throw ConfigError("feature map input dimension mismatch");
  const std::size_t width = 2 * order_ + 1;
  std::vector<double> out(config_.d_prime, 0.0);
  double total = 0.0;
  for (const double v : x) {
    if (v < 0.0) throw ConfigError("negative feature is not allowed for chi2/js");
    total += v;
  }
  if (!(total > 0.0)) throw ConfigError("zero-mass histogram cannot be embedded");
  const double step = config_.sampling_interval;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i] / total;
    if (xi <= 0.0) continue;
    double* f = out.data() + i * width;
    f[0] = std::sqrt(xi * spectrum_weights_[0]);
    const double log_x = std::log(xi);
    for (std::size_t r = 1; r <= order_; ++r) {
      const double amp = std::sqrt(xi * spectrum_weights_[r]);
      const double phase = static_cast<double>(r) * step * log_x;
      f[2 * r - 1] = amp * std::cos(phase);
      f[2 * r] = amp * std::sin(phase);
    }
  }
  return out;
}

void FeatureMap::apply(std::span<const double> x, std::span<double> out) const {
  if (x.size() != config_.input_dim) throw ConfigError("feature map input dimension mismatch");
  if (out.size() != output_dim()) throw ConfigError("feature map output buffer has wrong size");
  const auto& k = simd::kernels();
  if (is_fourier(config_.measure)) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(config_.d_prime));
    for (std::size_t i = 0; i < config_.d_prime; ++i) {
      const double z = k.dot(frequencies_.data() + i * config_.input_dim, x.data(), x.size());
      out[2 * i] = std::sin(z) * scale;
      out[2 * i + 1] = std::cos(z) * scale;
    }
    return;
  }
  const auto features = homogeneous_features(x);
  const double norm = std::sqrt(k.dot(features.data(), features.data(), features.size()));
  for (std::size_t i = 0; i < features.size(); ++i) out[i] = features[i] / norm;
}

std::vector<double> FeatureMap::apply(std::span<const double> x) const {
  std::vector<double> out(output_dim());
  apply(x, out);
  return out;
}

UnitVectorSet embed_dataset(const FeatureMap& map, const Dataset& data) {
  if (data.d() != map.input_dim()) throw ConfigError("feature map input dimension mismatch");
  const std::size_t dim = map.output_dim();
  UnitVectorSet out{data.n(), dim, std::vector<double>(data.n() * dim)};
  const auto n = static_cast<std::ptrdiff_t>(data.n());
  // Exceptions must not escape the parallel region; validate first.
  if (is_histogram_measure(map.measure())) {
    for (std::size_t i = 0; i < data.n(); ++i) {
      double total = 0.0;
      for (const double v : data.row(i)) {
        if (v < 0.0) {
          throw ConfigError("negative feature in point " + std::to_string(i) +
                            " is not allowed for chi2/js");
        }
        total += v;
      }
      if (!(total > 0.0)) throw ConfigError("point " + std::to_string(i) + " has zero mass");
    }
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    map.apply(data.row(idx), std::span<double>(out.values.data() + idx * dim, dim));
  }
  return out;
}

double embedded_epsilon(double eps, const FeatureMap& map) {
  const double sigma = map.config().sigma;
  switch (map.measure()) {
    case DistanceMeasure::l2:
      return 1.0 - std::exp(-eps * eps / (2.0 * sigma * sigma));
    case DistanceMeasure::l1:
      return 1.0 - std::exp(-eps / sigma);
    default:
      return eps;
  }
}

}  // namespace sdbscan
