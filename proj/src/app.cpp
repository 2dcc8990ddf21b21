#include "sdbscan/app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>

#include "sdbscan/ceos.hpp"
#include "sdbscan/embed.hpp"
#include "sdbscan/error.hpp"
#include "sdbscan/labels_io.hpp"
#include "sdbscan/oracle.hpp"
#include "sdbscan/parallel.hpp"

namespace sdbscan::cli {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  return out;
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool needs_data(Command c) {
  return c == Command::sdbscan || c == Command::soptics || c == Command::exact_dbscan ||
         c == Command::exact_optics;
}

std::size_t feature_count(const RunConfig& config, std::size_t input_dim) {
  if (is_histogram_measure(config.measure)) {
    const std::size_t derived = (2 * config.kernel_order + 1) * input_dim;
    if (config.kernel_features && *config.kernel_features != derived) {
      const std::size_t ratio = *config.kernel_features / input_dim;
      if (*config.kernel_features % input_dim != 0 || ratio % 2 == 0 || ratio < 3) {
        throw ConfigError("--kernel-features for chi2/js must be (2l+1)*d with d = " +
                          std::to_string(input_dim));
      }
      return *config.kernel_features;
    }
    return derived;
  }
  return config.kernel_features.value_or(1024);
}

void write_labels_file(const std::string& path, const ClusterLabels& labels) {
  if (path.empty()) return;
  auto out = open_output(path);
  write_labels_csv(out, labels.labels);
}

void write_ordering_file(const std::string& path, const ReachabilityOrdering& ordering) {
  if (path.empty()) return;
  auto out = open_output(path);
  if (ends_with(path, ".csv")) {
    write_ordering_csv(out, ordering);
  } else {
    out << to_json(ordering).dump() << '\n';
  }
}

void fill_label_stats(RunReport& report, const ClusterLabels& labels, const Dataset* data) {
  report.num_clusters = labels.num_clusters;
  report.noise_fraction =
      labels.labels.empty() ? 0.0
                            : static_cast<double>(labels.noise_count()) /
                                  static_cast<double>(labels.labels.size());
  report.num_core = static_cast<std::size_t>(std::count(labels.core.begin(), labels.core.end(), 1));
  if (data != nullptr && data->has_labels()) report.nmi = nmi(labels.labels, data->labels());
}

// Embedding, index and neighborhoods shared by sdbscan and soptics.
struct Neighborhoods {
  UnitVectorSet unit;
  std::optional<CeosIndex> index;
  CoreSet core;
};

Neighborhoods approximate_neighborhoods(const RunConfig& config, const Dataset& data,
                                        const MetricSpace& space, RunReport& report) {
  const double eps = *config.eps;
  const auto start = Clock::now();
  Neighborhoods out;
  double index_eps = eps;
  if (config.measure == DistanceMeasure::cosine) {
    out.unit = normalize_to_sphere(data);
  } else {
    EmbeddingConfig ec;
    ec.measure = config.measure;
    ec.input_dim = data.d();
    ec.d_prime = feature_count(config, data.d());
    ec.sigma = config.sigma.value_or(2.0 * eps);
    ec.sampling_interval = config.sampling_interval;
    ec.seed = config.seed ^ 0x9e3779b97f4a7c15ULL;
    const FeatureMap map = build_feature_map(ec);
    out.unit = embed_dataset(map, data);
    index_eps = embedded_epsilon(eps, map);
  }

  NeighborhoodParams np;
  np.eps = eps;
  np.min_pts = config.min_pts;
  np.mode = config.adaptive ? CandidateMode::adaptive : CandidateMode::fixed_m;
  np.threshold_form = config.threshold_form;
  np.index_eps = index_eps;
  np.candidate_cap = config.candidate_cap;

  IndexParams ip;
  ip.num_projections = config.projections;
  ip.top_vectors = config.top_vectors;
  ip.top_points = config.adaptive ? np.effective_cap() : config.top_points.value_or(config.min_pts);
  ip.seed = config.seed;
  out.index.emplace(build_index(out.unit, ip));
  report.seconds.preprocess = seconds_since(start);

  const auto nb_start = Clock::now();
  out.core = config.adaptive ? find_core_points_adaptive(space, *out.index, np)
                             : find_core_points(space, *out.index, np);
  report.seconds.neighborhoods = seconds_since(nb_start);
  return out;
}

}  // namespace

std::string_view to_string(Command command) {
  switch (command) {
    case Command::sdbscan:
      return "sdbscan";
    case Command::soptics:
      return "soptics";
    case Command::exact_dbscan:
      return "exact-dbscan";
    case Command::exact_optics:
      return "exact-optics";
    case Command::extract:
      return "extract";
    case Command::synth:
      return "synth";
    case Command::eval:
      return "eval";
  }
  return "unknown";
}

void validate(const RunConfig& c) {
  if (needs_data(c.command)) {
    if (c.data_path.empty()) throw ConfigError("--data is required");
    if (!c.eps) throw ConfigError("--eps is required");
    if (!(*c.eps > 0.0) || !std::isfinite(*c.eps)) throw ConfigError("--eps must be positive");
    if (c.min_pts == 0) throw ConfigError("--min-pts must be >= 1");
  }
  if (c.command == Command::sdbscan || c.command == Command::soptics) {
    if (c.projections == 0 || (c.projections & (c.projections - 1)) != 0) {
      throw ConfigError("--projections must be a power of two");
    }
    if (c.top_vectors == 0 || 2 * c.top_vectors > c.projections) {
      throw ConfigError("--top-vectors must satisfy 1 <= k <= projections/2");
    }
    if (c.top_points && *c.top_points == 0) throw ConfigError("--top-points must be >= 1");
    if (c.sigma && !(*c.sigma > 0.0)) throw ConfigError("--sigma must be positive");
    if (!(c.sampling_interval > 0.0)) throw ConfigError("--sampling-interval must be positive");
    if (c.kernel_order == 0) throw ConfigError("--kernel-order must be >= 1");
    if (c.kernel_features && *c.kernel_features == 0) {
      throw ConfigError("--kernel-features must be >= 1");
    }
    if (c.cluster_noise && (!(c.sample_fraction > 0.0) || c.sample_fraction > 1.0)) {
      throw ConfigError("--sample-fraction must be in (0, 1]");
    }
  }
  if (c.command == Command::extract) {
    if (c.ordering_path.empty()) throw ConfigError("--ordering is required");
    if (!c.eps_cut) throw ConfigError("--eps-cut is required");
  }
  if (c.command == Command::eval) {
    if (c.labels_path.empty()) throw ConfigError("--labels is required");
    if (c.truth_path.empty() && c.data_path.empty()) {
      throw ConfigError("eval needs --truth or --data with a label column");
    }
  }
  if (c.command == Command::synth && c.caps.clusters == 0) {
    throw ConfigError("--clusters must be >= 1");
  }
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j{{"command", std::string(to_string(c.command))},
                   {"data", c.data_path},
                   {"format", c.format == DataFormat::dense_csv ? "dense-csv" : "sparse-libsvm"},
                   {"dist", std::string(to_string(c.measure))},
                   {"min_pts", c.min_pts},
                   {"projections", c.projections},
                   {"top_vectors", c.top_vectors},
                   {"top_points", c.top_points.value_or(c.min_pts)},
                   {"kernel_order", c.kernel_order},
                   {"sampling_interval", c.sampling_interval},
                   {"adaptive", c.adaptive},
                   {"adaptive_threshold_form", std::string(to_string(c.threshold_form))},
                   {"candidate_cap", c.candidate_cap},
                   {"cluster_noise", c.cluster_noise},
                   {"sample_fraction", c.sample_fraction},
                   {"seed", c.seed},
                   {"threads", c.threads}};
  j["eps"] = c.eps ? nlohmann::json(*c.eps) : nlohmann::json();
  j["sigma"] = c.sigma ? nlohmann::json(*c.sigma)
                       : (c.eps ? nlohmann::json(2.0 * *c.eps) : nlohmann::json());
  j["kernel_features"] = c.kernel_features ? nlohmann::json(*c.kernel_features) : nlohmann::json();
  j["label_column"] = c.label_column ? nlohmann::json(*c.label_column) : nlohmann::json();
  if (c.eps_cut) j["eps_cut"] = *c.eps_cut;
  return j;
}

void apply_config_fragment(RunConfig& config, const nlohmann::json& fragment, bool eps_set,
                           bool min_pts_set, bool dist_set) {
  try {
    if (!eps_set && fragment.contains("eps")) config.eps = fragment.at("eps").get<double>();
    if (!min_pts_set && fragment.contains("min_pts")) {
      config.min_pts = fragment.at("min_pts").get<std::size_t>();
    }
    if (!dist_set && fragment.contains("dist")) {
      config.measure = parse_measure(fragment.at("dist").get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config fragment: ") + e.what());
  }
}

RunResult run(const RunConfig& config) {
  validate(config);
  set_thread_count(config.threads);

  RunResult result;
  RunReport& report = result.report;
  report.algorithm = std::string(to_string(config.command));
  report.params = to_json(config);

  switch (config.command) {
    case Command::sdbscan:
    case Command::soptics: {
      const Dataset data = load_dataset(config.data_path, config.format, config.label_column);
      const MetricSpace space(data, config.measure);
      auto nb = approximate_neighborhoods(config, data, space, report);
      const auto start = Clock::now();
      if (config.command == Command::sdbscan) {
        ClusterLabels labels = form_clusters(nb.core);
        if (config.cluster_noise) {
          labels = label_noncore_1nn(nb.unit, *nb.index, labels, config.sample_fraction,
                                     config.seed)
                       .labels;
        }
        report.seconds.clustering = seconds_since(start);
        fill_label_stats(report, labels, &data);
        write_labels_file(config.out_path, labels);
        result.labels = std::move(labels);
      } else {
        auto ordering = run_soptics(nb.core, {*config.eps, config.min_pts, config.measure});
        report.seconds.clustering = seconds_since(start);
        report.num_core = nb.core.num_core();
        write_ordering_file(config.out_path, ordering);
        result.ordering = std::move(ordering);
      }
      break;
    }
    case Command::exact_dbscan:
    case Command::exact_optics: {
      const Dataset data = load_dataset(config.data_path, config.format, config.label_column);
      if (data.n() > kExactLimit && !config.allow_large) {
        throw ConfigError("exact mode on " + std::to_string(data.n()) +
                          " points needs --allow-large");
      }
      const MetricSpace space(data, config.measure);
      const auto start = Clock::now();
      const CoreSet core =
          CoreSet::from_neighborhoods(exact_range(space, *config.eps), config.min_pts);
      report.seconds.neighborhoods = seconds_since(start);
      const auto cl_start = Clock::now();
      if (config.command == Command::exact_dbscan) {
        ClusterLabels labels = form_clusters(core);
        report.seconds.clustering = seconds_since(cl_start);
        fill_label_stats(report, labels, &data);
        write_labels_file(config.out_path, labels);
        result.labels = std::move(labels);
      } else {
        auto ordering = run_soptics(core, {*config.eps, config.min_pts, config.measure});
        report.seconds.clustering = seconds_since(cl_start);
        report.num_core = core.num_core();
        write_ordering_file(config.out_path, ordering);
        result.ordering = std::move(ordering);
      }
      break;
    }
    case Command::extract: {
      std::ifstream in(config.ordering_path);
      if (!in) throw Error("cannot open " + config.ordering_path);
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw Error(config.ordering_path + ": " + e.what());
      }
      const auto ordering = ordering_from_json(doc);
      ClusterLabels labels = extract_eps_cut(ordering, *config.eps_cut);
      fill_label_stats(report, labels, nullptr);
      if (!config.truth_path.empty()) {
        report.nmi = nmi(labels.labels, read_labels_csv(config.truth_path));
      }
      write_labels_file(config.out_path, labels);
      result.labels = std::move(labels);
      break;
    }
    case Command::synth: {
      auto set = spherical_caps(config.caps);
      if (config.out_path.empty()) {
        write_dataset_csv(std::cout, set.data);
      } else {
        auto out = open_output(config.out_path);
        write_dataset_csv(out, set.data);
      }
      report.params = {{"command", "synth"}};
      report.params["caps"] = {{"per_cluster", config.caps.per_cluster},
                               {"clusters", config.caps.clusters},
                               {"dim", config.caps.dim},
                               {"cap_angle", config.caps.cap_angle},
                               {"noise", config.caps.noise},
                               {"seed", config.caps.seed}};
      report.params["certificate"] = {{"max_intra", set.certificate.max_intra},
                                      {"min_inter", set.certificate.min_inter}};
      report.num_clusters = static_cast<int>(config.caps.clusters);
      result.certificate = set.certificate;
      break;
    }
    case Command::eval: {
      const auto predicted = read_labels_csv(config.labels_path);
      std::vector<int> truth;
      if (!config.truth_path.empty()) {
        truth = read_labels_csv(config.truth_path);
      } else {
        const Dataset data = load_dataset(config.data_path, config.format, config.label_column);
        if (!data.has_labels()) throw ConfigError("--data has no label column");
        truth = data.labels();
      }
      report.nmi = nmi(predicted, truth);
      std::set<int> clusters(predicted.begin(), predicted.end());
      clusters.erase(kNoise);
      report.num_clusters = static_cast<int>(clusters.size());
      report.noise_fraction =
          predicted.empty() ? 0.0
                            : static_cast<double>(std::count(predicted.begin(), predicted.end(), kNoise)) /
                                  static_cast<double>(predicted.size());
      break;
    }
  }

  if (!config.report_path.empty()) {
    auto out = open_output(config.report_path);
    out << to_json(report).dump(2) << '\n';
  }
  return result;
}

}  // namespace sdbscan::cli
