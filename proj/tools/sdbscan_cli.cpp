#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sdbscan/app.hpp"
#include "sdbscan/error.hpp"

using sdbscan::cli::Command;
using sdbscan::cli::RunConfig;

namespace {

struct RawOptions {
  std::string measure = "cosine";
  std::string format = "dense-csv";
  std::string threshold_form = "one-minus-eps";
  std::string config_path;
};

void add_data_options(CLI::App* cmd, RunConfig& c, RawOptions& raw) {
  cmd->add_option("--data", c.data_path, "Input dataset");
  cmd->add_option("--format", raw.format, "dense-csv | sparse-libsvm")->capture_default_str();
  cmd->add_option("--label-column", c.label_column, "0-based CSV column holding labels");
  cmd->add_option("--dist", raw.measure, "cosine | l2 | l1 | chi2 | js")->capture_default_str();
  cmd->add_option("--eps", c.eps, "Distance threshold epsilon");
  cmd->add_option("--min-pts", c.min_pts, "Density threshold minPts")->capture_default_str();
  cmd->add_option("--out", c.out_path, "Labels CSV or ordering JSON/CSV output");
  cmd->add_option("--report", c.report_path, "Write the run report here instead of stdout");
  cmd->add_option("--threads", c.threads, "Worker threads (0 = all)")->capture_default_str();
  cmd->add_option("--config", raw.config_path, "JSON fragment {eps, min_pts, dist}");
}

void add_index_options(CLI::App* cmd, RunConfig& c, RawOptions& raw) {
  cmd->add_option("--projections", c.projections, "Random vectors D (power of two)")
      ->capture_default_str();
  cmd->add_option("--top-vectors", c.top_vectors, "Extreme vectors k per point")
      ->capture_default_str();
  cmd->add_option("--top-points", c.top_points, "Extreme points m per vector (default minPts)");
  cmd->add_option("--kernel-features", c.kernel_features, "Random features d'");
  cmd->add_option("--kernel-order", c.kernel_order, "Homogeneous map order l for chi2/js")
      ->capture_default_str();
  cmd->add_option("--sigma", c.sigma, "Kernel scale (default 2*eps)");
  cmd->add_option("--sampling-interval", c.sampling_interval, "Homogeneous map period")
      ->capture_default_str();
  cmd->add_flag("--adaptive", c.adaptive, "Threshold-based candidate sets");
  cmd->add_option("--adaptive-threshold-form", raw.threshold_form,
                  "one-minus-eps | one-minus-eps-sq-over-2")
      ->capture_default_str();
  cmd->add_option("--candidate-cap", c.candidate_cap, "Adaptive cap per vector (0 = 8*minPts)");
  cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-projection DBSCAN / OPTICS for high-dimensional data"};
  app.require_subcommand(1);
  RunConfig config;
  RawOptions raw;

  auto* sdbscan = app.add_subcommand("sdbscan", "Approximate DBSCAN");
  add_data_options(sdbscan, config, raw);
  add_index_options(sdbscan, config, raw);
  sdbscan->add_flag("--cluster-noise", config.cluster_noise, "Label noise points by CEOs 1NN");
  sdbscan->add_option("--sample-fraction", config.sample_fraction, "Core sample for 1NN")
      ->capture_default_str();

  auto* soptics = app.add_subcommand("soptics", "Approximate OPTICS reachability ordering");
  add_data_options(soptics, config, raw);
  add_index_options(soptics, config, raw);
  auto* optics_alias = app.add_subcommand("optics", "Alias of soptics");
  add_data_options(optics_alias, config, raw);
  add_index_options(optics_alias, config, raw);

  auto* exact_dbscan = app.add_subcommand("exact-dbscan", "Brute-force DBSCAN");
  add_data_options(exact_dbscan, config, raw);
  exact_dbscan->add_flag("--allow-large", config.allow_large, "Permit n > 100000");
  auto* exact_optics = app.add_subcommand("exact-optics", "Brute-force OPTICS");
  add_data_options(exact_optics, config, raw);
  exact_optics->add_flag("--allow-large", config.allow_large, "Permit n > 100000");

  auto* extract = app.add_subcommand("extract", "Flat clustering from an ordering at an eps cut");
  extract->add_option("--ordering", config.ordering_path, "Ordering JSON")->required();
  extract->add_option("--eps-cut", config.eps_cut, "Cut threshold")->required();
  extract->add_option("--out", config.out_path, "Labels CSV");
  extract->add_option("--truth", config.truth_path, "Ground-truth labels CSV for NMI");
  extract->add_option("--report", config.report_path, "Report path");

  auto* synth = app.add_subcommand("synth", "Spherical-cap synthetic data (CSV, label last)");
  synth->add_option("--per-cluster", config.caps.per_cluster)->capture_default_str();
  synth->add_option("--clusters", config.caps.clusters)->capture_default_str();
  synth->add_option("--dim", config.caps.dim)->capture_default_str();
  synth->add_option("--cap-angle", config.caps.cap_angle, "Radians")->capture_default_str();
  synth->add_option("--noise", config.caps.noise)->capture_default_str();
  synth->add_option("--seed", config.caps.seed)->capture_default_str();
  synth->add_option("--out", config.out_path, "CSV path (default stdout)");
  synth->add_option("--report", config.report_path, "Certificate/report path");

  auto* eval = app.add_subcommand("eval", "NMI between a labels file and ground truth");
  eval->add_option("--labels", config.labels_path)->required();
  eval->add_option("--truth", config.truth_path, "Labels CSV");
  eval->add_option("--data", config.data_path, "Dataset with a label column");
  eval->add_option("--format", raw.format)->capture_default_str();
  eval->add_option("--label-column", config.label_column);
  eval->add_option("--report", config.report_path);

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    if (name == "sdbscan") config.command = Command::sdbscan;
    else if (name == "soptics" || name == "optics") config.command = Command::soptics;
    else if (name == "exact-dbscan") config.command = Command::exact_dbscan;
    else if (name == "exact-optics") config.command = Command::exact_optics;
    else if (name == "extract") config.command = Command::extract;
    else if (name == "synth") config.command = Command::synth;
    else config.command = Command::eval;

    config.format = sdbscan::parse_format(raw.format);
    config.measure = sdbscan::parse_measure(raw.measure);
    config.threshold_form = sdbscan::parse_threshold_form(raw.threshold_form);
    if (!raw.config_path.empty()) {
      std::ifstream in(raw.config_path);
      if (!in) throw sdbscan::Error("cannot open " + raw.config_path);
      const auto fragment = nlohmann::json::parse(in, nullptr, false);
      if (fragment.is_discarded()) throw sdbscan::ConfigError("config fragment is not valid JSON");
      sdbscan::cli::apply_config_fragment(config, fragment, chosen->count("--eps") > 0,
                                          chosen->count("--min-pts") > 0,
                                          chosen->count("--dist") > 0);
    }

    const auto result = sdbscan::cli::run(config);
    const bool csv_on_stdout = config.command == Command::synth && config.out_path.empty();
    if (config.report_path.empty()) {
      (csv_on_stdout ? std::cerr : std::cout) << to_json(result.report).dump(2) << '\n';
    }
    return 0;
  } catch (const sdbscan::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\nRun with --help for usage.\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
