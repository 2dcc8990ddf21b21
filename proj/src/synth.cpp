#include "sdbscan/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "sdbscan/error.hpp"

namespace sdbscan {
namespace {

constexpr int kRetryBudget = 10000;

std::vector<double> random_unit(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(d);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& x : v) {
      x = normal(rng);
      norm += x * x;
    }
  } while (norm < 1e-12);
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

SeparationCertificate certify_separation(const Dataset& data, DistanceMeasure measure) {
  if (!data.has_labels()) throw ConfigError("certificate needs ground-truth labels");
  const MetricSpace space(data, measure);
  const auto& labels = data.labels();
  SeparationCertificate cert{0.0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < data.n(); ++i) {
    if (labels[i] < 0) continue;
    for (std::size_t j = i + 1; j < data.n(); ++j) {
      if (labels[j] < 0) continue;
      const double dist = space(i, j);
      if (labels[i] == labels[j]) {
        cert.max_intra = std::max(cert.max_intra, dist);
      } else {
        cert.min_inter = std::min(cert.min_inter, dist);
      }
    }
  }
  return cert;
}

SyntheticSet spherical_caps(const CapParams& params) {
  if (params.clusters == 0 || params.dim < 2) {
    throw ConfigError("spherical caps need >= 1 cluster and dim >= 2");
  }
  if (params.cap_angle < 0.0) throw ConfigError("cap angle must be non-negative");
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t d = params.dim;

  std::vector<std::vector<double>> centers;
  const double min_center_cos = std::cos(std::min(3.0 * params.cap_angle, std::numbers::pi));
  for (std::size_t c = 0; c < params.clusters; ++c) {
    int attempts = 0;
    while (true) {
      auto candidate = random_unit(d, rng);
      const bool far = std::all_of(centers.begin(), centers.end(), [&](const auto& other) {
        return dot(candidate, other) <= min_center_cos;
      });
      if (far) {
        centers.push_back(std::move(candidate));
        break;
      }
      if (++attempts >= kRetryBudget) {
        throw ConfigError("could not place " + std::to_string(params.clusters) +
                          " cap centers; use fewer clusters, a larger dimension or a smaller "
                          "cap angle");
      }
    }
  }

  const std::size_t n = params.per_cluster * params.clusters + params.noise;
  std::vector<double> values;
  values.reserve(n * d);
  std::vector<int> labels;
  labels.reserve(n);
  for (std::size_t c = 0; c < params.clusters; ++c) {
    const auto& center = centers[c];
    for (std::size_t i = 0; i < params.per_cluster; ++i) {
      // Tangent direction orthogonal to the center.
      auto tangent = random_unit(d, rng);
      const double along = dot(tangent, center);
      double norm = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        tangent[j] -= along * center[j];
        norm += tangent[j] * tangent[j];
      }
      norm = std::sqrt(norm);
      // Angle with density close to uniform over the cap volume.
      const double theta =
          params.cap_angle * std::pow(unit(rng), 1.0 / static_cast<double>(d - 1));
      const double ct = std::cos(theta);
      const double st = norm > 0.0 ? std::sin(theta) / norm : 0.0;
      for (std::size_t j = 0; j < d; ++j) values.push_back(ct * center[j] + st * tangent[j]);
      labels.push_back(static_cast<int>(c));
    }
  }
  for (std::size_t i = 0; i < params.noise; ++i) {
    const auto p = random_unit(d, rng);
    values.insert(values.end(), p.begin(), p.end());
    labels.push_back(-1);
  }

  Dataset data(n, d, std::move(values), std::move(labels));
  auto cert = certify_separation(data, DistanceMeasure::cosine);
  return {std::move(data), cert};
}

SyntheticSet gaussian_blobs(const BlobParams& params) {
  if (params.clusters == 0 || params.dim == 0) throw ConfigError("blobs need clusters and dim >= 1");
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> uniform(0.0, params.center_scale);
  std::normal_distribution<double> normal(0.0, params.spread);
  const std::size_t d = params.dim;

  std::vector<std::vector<double>> centers(params.clusters, std::vector<double>(d));
  for (auto& c : centers) {
    for (double& x : c) x = uniform(rng);
  }
  const std::size_t n = params.per_cluster * params.clusters + params.noise;
  std::vector<double> values;
  values.reserve(n * d);
  std::vector<int> labels;
  for (std::size_t c = 0; c < params.clusters; ++c) {
    for (std::size_t i = 0; i < params.per_cluster; ++i) {
      for (std::size_t j = 0; j < d; ++j) values.push_back(centers[c][j] + normal(rng));
      labels.push_back(static_cast<int>(c));
    }
  }
  for (std::size_t i = 0; i < params.noise; ++i) {
    for (std::size_t j = 0; j < d; ++j) values.push_back(uniform(rng));
    labels.push_back(-1);
  }
  if (params.non_negative) {
    const double low = *std::min_element(values.begin(), values.end());
    if (low < 0.0) {
      for (double& v : values) v -= low;
    }
  }
  Dataset data(n, d, std::move(values), std::move(labels));
  auto cert = certify_separation(data, params.certify_with);
  return {std::move(data), cert};
}

}  // namespace sdbscan
