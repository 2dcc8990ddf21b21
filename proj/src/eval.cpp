#include "sdbscan/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>
#include <vector>

#include "sdbscan/error.hpp"

namespace sdbscan {
namespace {

// Relabels to dense 0..k-1 in order of first appearance.
std::vector<std::size_t> compact(std::span<const int> labels, std::size_t& count) {
  std::unordered_map<int, std::size_t> ids;
  std::vector<std::size_t> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out[i] = ids.try_emplace(labels[i], ids.size()).first->second;
  }
  count = ids.size();
  return out;
}

double entropy(const std::vector<double>& counts, double n) {
  double h = 0.0;
  for (const double c : counts) {
    if (c > 0.0) h -= (c / n) * std::log(c / n);
  }
  return h;
}

}  // namespace

double nmi(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw ConfigError("nmi: label vectors differ in length");
  if (a.empty()) return 0.0;
  std::size_t ka = 0, kb = 0;
  const auto ca = compact(a, ka);
  const auto cb = compact(b, kb);
  const double n = static_cast<double>(a.size());

  std::vector<double> row(ka, 0.0), col(kb, 0.0);
  std::map<std::pair<std::size_t, std::size_t>, double> joint;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    row[ca[i]] += 1.0;
    col[cb[i]] += 1.0;
    joint[{ca[i], cb[i]}] += 1.0;
  }
  const double ha = entropy(row, n);
  const double hb = entropy(col, n);
  if (ha == 0.0 || hb == 0.0) return 0.0;

  double mi = 0.0;
  for (const auto& [cell, count] : joint) {
    mi += (count / n) * std::log(count * n / (row[cell.first] * col[cell.second]));
  }
  const double value = mi / ((ha + hb) / 2.0);
  return std::clamp(value, 0.0, 1.0);
}

nlohmann::json to_json(const RunReport& report) {
  nlohmann::json out{{"algorithm", report.algorithm},
                     {"num_clusters", report.num_clusters},
                     {"noise_fraction", report.noise_fraction},
                     {"num_core", report.num_core},
                     {"seconds",
                      {{"preprocess", report.seconds.preprocess},
                       {"neighborhoods", report.seconds.neighborhoods},
                       {"clustering", report.seconds.clustering}}},
                     {"params", report.params}};
  out["nmi"] = report.nmi ? nlohmann::json(*report.nmi) : nlohmann::json();
  return out;
}

}  // namespace sdbscan
