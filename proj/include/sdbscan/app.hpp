#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "sdbscan/cluster.hpp"
#include "sdbscan/dataset.hpp"
#include "sdbscan/eval.hpp"
#include "sdbscan/neighbors.hpp"
#include "sdbscan/optics.hpp"
#include "sdbscan/synth.hpp"

#include "json.hpp"

namespace sdbscan::cli {

enum class Command { sdbscan, soptics, exact_dbscan, exact_optics, extract, synth, eval };

std::string_view to_string(Command command);

// Exact modes refuse larger inputs unless allow_large is set.
inline constexpr std::size_t kExactLimit = 100000;

/// Every user-facing parameter of one run. Defaults:
/// D = 1024, k = 5, m = minPts = 50, σ = 2ε, sampling interval 0.4.
struct RunConfig {
  Command command = Command::sdbscan;

  std::string data_path;
  DataFormat format = DataFormat::dense_csv;
  std::optional<std::size_t> label_column;
  DistanceMeasure measure = DistanceMeasure::cosine;

  std::optional<double> eps;
  std::size_t min_pts = 50;

  std::size_t projections = 1024;
  std::size_t top_vectors = 5;
  std::optional<std::size_t> top_points;  // default min_pts

  std::optional<std::size_t> kernel_features;  // d' (default 1024 for L1/L2)
  std::size_t kernel_order = 2;                // l for χ²/JS
  std::optional<double> sigma;                 // default 2ε
  double sampling_interval = 0.4;

  bool adaptive = false;
  ThresholdForm threshold_form = ThresholdForm::one_minus_eps;
  std::size_t candidate_cap = 0;

  bool cluster_noise = false;
  double sample_fraction = 0.01;

  std::uint64_t seed = 42;
  std::size_t threads = 0;  // 0 = all hardware threads
  bool allow_large = false;

  std::string out_path;
  std::string report_path;

  // extract
  std::string ordering_path;
  std::optional<double> eps_cut;

  // synth
  CapParams caps;

  // eval
  std::string labels_path;
  std::string truth_path;
};

/// Throws ConfigError naming the first invalid or missing parameter.
void validate(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);

/// Applies a {"eps", "min_pts", "dist"} fragment (as exported by the
/// reachability-plot explorer) to fields not set explicitly.
void apply_config_fragment(RunConfig& config, const nlohmann::json& fragment, bool eps_set,
                           bool min_pts_set, bool dist_set);

struct RunResult {
  RunReport report;
  std::optional<ClusterLabels> labels;
  std::optional<ReachabilityOrdering> ordering;
  std::optional<SeparationCertificate> certificate;
};

/// Validates, executes the requested pipeline and writes the output files
/// named in the config. The report is returned, not written.
RunResult run(const RunConfig& config);

}  // namespace sdbscan::cli
