#include "sdbscan/optics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "sdbscan/error.hpp"

namespace sdbscan {

std::optional<std::pair<std::uint32_t, double>> PendingQueue::pop(
    const std::vector<std::uint8_t>& processed) {
  while (!heap_.empty()) {
    const Item top = heap_.top();
    heap_.pop();
    if (processed[top.point]) continue;
    return std::make_pair(top.point, top.key);
  }
  return std::nullopt;
}

double core_dist(const CoreSet& core, std::size_t q) {
  if (!core.is_core(q)) return kInfinity;
  const auto neighbors = core.neighbors(q);
  std::vector<double> dists;
  dists.reserve(neighbors.size());
  for (const auto& nb : neighbors) dists.push_back(nb.dist);
  const auto nth = dists.begin() + static_cast<std::ptrdiff_t>(core.min_pts() - 1);
  std::nth_element(dists.begin(), nth, dists.end());
  return *nth;
}

double reach_dist(const CoreSet& core, std::size_t x, std::size_t q) {
  if (!core.is_core(q)) return kInfinity;
  const Neighbor* nb = core.find(q, x);
  if (nb == nullptr) {
    throw ConfigError("point " + std::to_string(x) + " is not in the neighborhood of " +
                      std::to_string(q));
  }
  return std::max(core_dist(core, q), nb->dist);
}

ReachabilityOrdering run_soptics(const CoreSet& core, const OrderingParams& params) {
  const std::size_t n = core.size();
  std::vector<double> core_dists(n);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    core_dists[static_cast<std::size_t>(i)] = core_dist(core, static_cast<std::size_t>(i));
  }

  ReachabilityOrdering ordering{params, {}};
  ordering.entries.reserve(n);
  std::vector<std::uint8_t> processed(n, 0);
  std::vector<double> reach(n, kInfinity);

  auto emit = [&](std::size_t p, double r) {
    processed[p] = 1;
    ordering.entries.push_back({static_cast<std::uint32_t>(p), r, core_dists[p]});
  };
  auto expand = [&](std::size_t q, PendingQueue& seeds) {
    for (const auto& nb : core.neighbors(q)) {
      if (processed[nb.id]) continue;
      reach[nb.id] = std::min(reach[nb.id], std::max(core_dists[q], nb.dist));
      seeds.push(nb.id, reach[nb.id]);
    }
  };

  for (std::size_t q = 0; q < n; ++q) {
    if (processed[q]) continue;
    emit(q, reach[q]);
    if (!core.is_core(q)) continue;
    PendingQueue seeds;
    expand(q, seeds);
    while (auto next = seeds.pop(processed)) {
      const auto [p, key] = *next;
      emit(p, key);
      if (core.is_core(p)) expand(p, seeds);
    }
  }
  return ordering;
}

ClusterLabels extract_eps_cut(const ReachabilityOrdering& ordering, double eps_cut) {
  if (eps_cut > ordering.params.eps) {
    throw ConfigError("eps cut " + std::to_string(eps_cut) + " exceeds the ordering's eps " +
                      std::to_string(ordering.params.eps));
  }
  std::size_t n = 0;
  for (const auto& e : ordering.entries) n = std::max<std::size_t>(n, e.id + 1);
  ClusterLabels out;
  out.labels.assign(n, kNoise);
  out.core.assign(n, 0);
  int current = kNoise;
  for (const auto& e : ordering.entries) {
    out.core[e.id] = e.core_dist <= eps_cut ? 1 : 0;
    if (e.reach > eps_cut) {
      if (e.core_dist <= eps_cut) {
        current = out.num_clusters++;
        out.labels[e.id] = current;
      }
    } else {
      out.labels[e.id] = current;
    }
  }
  return out;
}

namespace {

nlohmann::json finite_or_null(double v) { return std::isinf(v) ? nlohmann::json() : nlohmann::json(v); }

double from_json_value(const nlohmann::json& v) {
  return v.is_null() ? kInfinity : v.get<double>();
}

std::string csv_value(double v) {
  if (std::isinf(v)) return "inf";
  return nlohmann::json(v).dump();
}

}  // namespace

nlohmann::json to_json(const ReachabilityOrdering& ordering) {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < ordering.entries.size(); ++i) {
    const auto& e = ordering.entries[i];
    entries.push_back({{"order", i},
                       {"id", e.id},
                       {"reach", finite_or_null(e.reach)},
                       {"core", finite_or_null(e.core_dist)}});
  }
  return {{"params",
           {{"eps", ordering.params.eps},
            {"minPts", ordering.params.min_pts},
            {"measure", std::string(to_string(ordering.params.measure))}}},
          {"entries", std::move(entries)}};
}

ReachabilityOrdering ordering_from_json(const nlohmann::json& doc) {
  try {
    ReachabilityOrdering out;
    const auto& params = doc.at("params");
    out.params.eps = params.at("eps").get<double>();
    out.params.min_pts = params.at("minPts").get<std::size_t>();
    out.params.measure = parse_measure(params.at("measure").get<std::string>());
    for (const auto& e : doc.at("entries")) {
      out.entries.push_back({e.at("id").get<std::uint32_t>(), from_json_value(e.at("reach")),
                             from_json_value(e.at("core"))});
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed ordering document: ") + e.what());
  }
}

void write_ordering_csv(std::ostream& out, const ReachabilityOrdering& ordering) {
  out << "order,id,reach,core\n";
  for (std::size_t i = 0; i < ordering.entries.size(); ++i) {
    const auto& e = ordering.entries[i];
    out << i << ',' << e.id << ',' << csv_value(e.reach) << ',' << csv_value(e.core_dist) << '\n';
  }
}

}  // namespace sdbscan
