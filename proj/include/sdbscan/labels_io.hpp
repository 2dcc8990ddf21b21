#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "sdbscan/dataset.hpp"

namespace sdbscan {

// "point_id,cluster_id" header followed by one row per point, -1 for noise.
void write_labels_csv(std::ostream& out, const std::vector<int>& labels);
std::vector<int> read_labels_csv(std::istream& in);
std::vector<int> read_labels_csv(const std::filesystem::path& path);

// Dense CSV with the label as the last column (the synth output format).
void write_dataset_csv(std::ostream& out, const Dataset& data);

}  // namespace sdbscan
