#include "sdbscan/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string>

#include "sdbscan/error.hpp"
#include "sdbscan/simd/kernels.hpp"

namespace sdbscan {
namespace {

constexpr double kMinNorm = 1e-12;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view token, std::size_t line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line, "cannot parse '" + std::string(token) + "' as a number");
  }
  if (!std::isfinite(value)) {
    throw ParseError(line, "non-finite value '" + std::string(token) + "'");
  }
  return value;
}

int parse_label(std::string_view token, std::size_t line) {
  const double value = parse_real(token, line);
  if (value != std::floor(value)) {
    throw ParseError(line, "label '" + std::string(trim(token)) + "' is not an integer");
  }
  return static_cast<int>(value);
}

Dataset parse_csv(std::istream& in, std::optional<std::size_t> label_column) {
  std::vector<double> values;
  std::vector<int> labels;
  std::size_t d = 0;
  std::size_t n = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::size_t columns = 0;
    std::size_t features = 0;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      const auto token = rest.substr(0, comma);
      if (label_column && columns == *label_column) {
        labels.push_back(parse_label(token, line_no));
      } else {
        values.push_back(parse_real(token, line_no));
        ++features;
      }
      ++columns;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (label_column && *label_column >= columns) {
      throw ParseError(line_no, "label column " + std::to_string(*label_column) + " out of range");
    }
    if (n == 0) {
      d = features;
    } else if (features != d) {
      throw ParseError(line_no, "expected " + std::to_string(d) + " features, found " +
                                    std::to_string(features));
    }
    ++n;
  }
  if (n == 0 || d == 0) throw ParseError(line_no, "no data points");
  std::optional<std::vector<int>> lab;
  if (label_column) lab = std::move(labels);
  return Dataset(n, d, std::move(values), std::move(lab));
}

Dataset parse_sparse(std::istream& in) {
  struct Entry {
    std::size_t index;
    double value;
  };
  std::vector<std::vector<Entry>> rows;
  std::vector<int> labels;
  std::size_t d = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = trim(line);
    if (rest.empty()) continue;
    auto next_token = [&rest]() {
      const auto first = rest.find_first_not_of(" \t");
      if (first == std::string_view::npos) {
        rest = {};
        return std::string_view{};
      }
      rest.remove_prefix(first);
      const auto end = rest.find_first_of(" \t");
      const auto token = rest.substr(0, end);
      rest.remove_prefix(end == std::string_view::npos ? rest.size() : end);
      return token;
    };
    labels.push_back(parse_label(next_token(), line_no));
    auto& row = rows.emplace_back();
    for (auto token = next_token(); !token.empty(); token = next_token()) {
      const auto colon = token.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(line_no, "expected idx:val, found '" + std::string(token) + "'");
      }
      const double idx = parse_real(token.substr(0, colon), line_no);
      if (idx < 1 || idx != std::floor(idx)) {
        throw ParseError(line_no, "feature index must be a positive integer");
      }
      const auto index = static_cast<std::size_t>(idx);
      row.push_back({index - 1, parse_real(token.substr(colon + 1), line_no)});
      d = std::max(d, index);
    }
  }
  if (rows.empty() || d == 0) throw ParseError(line_no, "no data points");
  std::vector<double> values(rows.size() * d, 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& e : rows[i]) values[i * d + e.index] = e.value;
  }
  return Dataset(rows.size(), d, std::move(values), std::move(labels));
}

void check_same_dim(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ConfigError("dimension mismatch: " + std::to_string(x.size()) + " vs " +
                      std::to_string(y.size()));
  }
}

// Copies `x` scaled to unit L1 norm; rejects negative entries and empty rows.
void l1_normalize_into(std::span<const double> x, double* out, std::size_t point) {
  double total = 0.0;
  for (const double v : x) {
    if (v < 0.0) {
      throw ConfigError("negative feature in point " + std::to_string(point) +
                        " is not allowed for chi2/js");
    }
    total += v;
  }
  if (total < kMinNorm) {
    throw ConfigError("point " + std::to_string(point) + " has zero mass; cannot L1-normalize");
  }
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] / total;
}

void l2_normalize_into(std::span<const double> x, double* out, std::size_t point) {
  const double norm = std::sqrt(simd::kernels().dot(x.data(), x.data(), x.size()));
  if (norm < kMinNorm) {
    throw ConfigError("point " + std::to_string(point) + " has zero norm");
  }
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] / norm;
}

// Distance between prepared rows.
double prepared_distance(const double* x, const double* y, std::size_t d, DistanceMeasure m) {
  const auto& k = simd::kernels();
  switch (m) {
    case DistanceMeasure::cosine:
      return std::clamp(1.0 - k.dot(x, y, d), 0.0, 2.0);
    case DistanceMeasure::l2:
      return std::sqrt(k.l2_squared(x, y, d));
    case DistanceMeasure::l1:
      return k.l1(x, y, d);
    case DistanceMeasure::chi2:
      return std::clamp(1.0 - k.chi2_similarity(x, y, d), 0.0, 1.0);
    case DistanceMeasure::js:
      return std::clamp(1.0 - js_similarity({x, d}, {y, d}), 0.0, 1.0);
  }
  return 0.0;
}

}  // namespace

std::string_view to_string(DistanceMeasure measure) {
  switch (measure) {
    case DistanceMeasure::cosine:
      return "cosine";
    case DistanceMeasure::l2:
      return "l2";
    case DistanceMeasure::l1:
      return "l1";
    case DistanceMeasure::chi2:
      return "chi2";
    case DistanceMeasure::js:
      return "js";
  }
  return "unknown";
}

DistanceMeasure parse_measure(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "cosine") return DistanceMeasure::cosine;
  if (lower == "l2") return DistanceMeasure::l2;
  if (lower == "l1") return DistanceMeasure::l1;
  if (lower == "chi2") return DistanceMeasure::chi2;
  if (lower == "js") return DistanceMeasure::js;
  throw ConfigError("unknown distance measure '" + std::string(name) + "'");
}

DataFormat parse_format(std::string_view name) {
  if (name == "dense-csv" || name == "csv") return DataFormat::dense_csv;
  if (name == "sparse-libsvm" || name == "libsvm") return DataFormat::sparse_libsvm;
  throw ConfigError("unknown data format '" + std::string(name) + "'");
}

Dataset::Dataset(std::size_t n, std::size_t d, std::vector<double> values,
                 std::optional<std::vector<int>> labels)
    : n_(n), d_(d), values_(std::move(values)), labels_(std::move(labels)) {
  if (n_ == 0 || d_ == 0) throw ConfigError("dataset needs n >= 1 and d >= 1");
  if (values_.size() != n_ * d_) throw ConfigError("dataset value count does not match n*d");
  if (labels_ && labels_->size() != n_) throw ConfigError("label count does not match n");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw ConfigError("non-finite feature in point " + std::to_string(i / d_));
    }
  }
}

Dataset load_dataset(const std::filesystem::path& path, DataFormat format,
                     std::optional<std::size_t> label_column) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return parse_dataset(in, format, label_column);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path.string());
  }
}

Dataset parse_dataset(std::istream& in, DataFormat format, std::optional<std::size_t> label_column) {
  return format == DataFormat::dense_csv ? parse_csv(in, label_column) : parse_sparse(in);
}

double js_similarity(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double sum = x[i] + y[i];
    if (x[i] > 0.0) acc += 0.5 * x[i] * std::log2(sum / x[i]);
    if (y[i] > 0.0) acc += 0.5 * y[i] * std::log2(sum / y[i]);
  }
  return acc;
}

double distance(std::span<const double> x, std::span<const double> y, DistanceMeasure measure) {
  check_same_dim(x, y);
  const std::size_t d = x.size();
  switch (measure) {
    case DistanceMeasure::l1:
    case DistanceMeasure::l2:
      return prepared_distance(x.data(), y.data(), d, measure);
    case DistanceMeasure::cosine: {
      std::vector<double> buf(2 * d);
      l2_normalize_into(x, buf.data(), 0);
      l2_normalize_into(y, buf.data() + d, 1);
      return prepared_distance(buf.data(), buf.data() + d, d, measure);
    }
    case DistanceMeasure::chi2:
    case DistanceMeasure::js: {
      std::vector<double> buf(2 * d);
      l1_normalize_into(x, buf.data(), 0);
      l1_normalize_into(y, buf.data() + d, 1);
      return prepared_distance(buf.data(), buf.data() + d, d, measure);
    }
  }
  return 0.0;
}

UnitVectorSet normalize_to_sphere(const Dataset& data) {
  UnitVectorSet out{data.n(), data.d(), std::vector<double>(data.n() * data.d())};
  for (std::size_t i = 0; i < data.n(); ++i) {
    l2_normalize_into(data.row(i), out.values.data() + i * data.d(), i);
  }
  return out;
}

MetricSpace::MetricSpace(const Dataset& data, DistanceMeasure measure)
    : n_(data.n()), d_(data.d()), measure_(measure), prepared_(data.values()) {
  for (std::size_t i = 0; i < n_; ++i) {
    double* out = prepared_.data() + i * d_;
    if (measure == DistanceMeasure::cosine) {
      l2_normalize_into(data.row(i), out, i);
    } else if (is_histogram_measure(measure)) {
      l1_normalize_into(data.row(i), out, i);
    }
  }
}

double MetricSpace::operator()(std::size_t i, std::size_t j) const {
  return prepared_distance(prepared_.data() + i * d_, prepared_.data() + j * d_, d_, measure_);
}

}  // namespace sdbscan
