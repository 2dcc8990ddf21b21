#pragma once

#include <optional>
#include <span>
#include <string>

#include "json.hpp"

namespace sdbscan {

/// Normalized mutual information with arithmetic-mean normalization and
/// natural logarithms. Noise (-1) counts as an ordinary label. Returns 0 when
/// either labeling is constant.
double nmi(std::span<const int> a, std::span<const int> b);

struct PhaseTimes {
  double preprocess = 0.0;
  double neighborhoods = 0.0;
  double clustering = 0.0;
};

struct RunReport {
  std::string algorithm;
  std::optional<double> nmi;
  int num_clusters = 0;
  double noise_fraction = 0.0;
  std::size_t num_core = 0;
  PhaseTimes seconds;
  nlohmann::json params;
};

nlohmann::json to_json(const RunReport& report);

}  // namespace sdbscan
