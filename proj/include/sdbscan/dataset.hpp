#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace sdbscan {

enum class DistanceMeasure { cosine, l2, l1, chi2, js };

std::string_view to_string(DistanceMeasure measure);
DistanceMeasure parse_measure(std::string_view name);

// Histogram measures are evaluated on L1-normalized, non-negative inputs.
constexpr bool is_histogram_measure(DistanceMeasure m) {
  return m == DistanceMeasure::chi2 || m == DistanceMeasure::js;
}

/// Dense n×d point matrix (row-major) with optional integer ground-truth
/// labels. Ground truth is only used for evaluation; -1 marks noise.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t n, std::size_t d, std::vector<double> values,
          std::optional<std::vector<int>> labels = std::nullopt);

  std::size_t n() const { return n_; }
  std::size_t d() const { return d_; }

  std::span<const double> row(std::size_t i) const { return {values_.data() + i * d_, d_}; }
  const std::vector<double>& values() const { return values_; }

  bool has_labels() const { return labels_.has_value(); }
  const std::vector<int>& labels() const { return *labels_; }

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<double> values_;
  std::optional<std::vector<int>> labels_;
};

enum class DataFormat { dense_csv, sparse_libsvm };

DataFormat parse_format(std::string_view name);

// Dense CSV: one point per line, comma-separated; `label_column` (0-based)
// is read as an integer label instead of a feature.
// Sparse: "label idx:val idx:val ..." with 1-based indices, densified.
Dataset load_dataset(const std::filesystem::path& path, DataFormat format,
                     std::optional<std::size_t> label_column = std::nullopt);
Dataset parse_dataset(std::istream& in, DataFormat format,
                      std::optional<std::size_t> label_column = std::nullopt);

/// Original-space distance. Cosine is 1 - cos; χ² and JS are 1 - K on the
/// L1-normalized inputs (JS with base-2 logarithms so K(x, x) = 1).
double distance(std::span<const double> x, std::span<const double> y, DistanceMeasure measure);

// Σ x_i/2 log2((x_i+y_i)/x_i) + y_i/2 log2((x_i+y_i)/y_i) on raw inputs.
double js_similarity(std::span<const double> x, std::span<const double> y);

/// Rows of unit L2 norm; the representation the projection index works on.
struct UnitVectorSet {
  std::size_t n = 0;
  std::size_t dim = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t i) const { return {values.data() + i * dim, dim}; }
};

UnitVectorSet normalize_to_sphere(const Dataset& data);

/// Pairwise distances between points of one dataset under one measure.
/// Rows are prepared once (unit-normalized for cosine, L1-normalized and
/// validated for χ²/JS) so every evaluation is a single kernel call.
class MetricSpace {
 public:
  MetricSpace(const Dataset& data, DistanceMeasure measure);

  std::size_t size() const { return n_; }
  DistanceMeasure measure() const { return measure_; }

  double operator()(std::size_t i, std::size_t j) const;

 private:
  std::size_t n_;
  std::size_t d_;
  DistanceMeasure measure_;
  std::vector<double> prepared_;
};

}  // namespace sdbscan
