#include "sdbscan/ceos.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "sdbscan/error.hpp"
#include "sdbscan/simd/kernels.hpp"

namespace sdbscan {
namespace {

constexpr std::size_t kBlockSize = 1024;

std::size_t next_pow2(std::size_t v) { return std::bit_ceil(std::max<std::size_t>(v, 1)); }

// Strict total orders: "a ranks before b" on each side, ties to lower id.
bool closer(const ProjectedPoint& a, const ProjectedPoint& b) {
  return a.value > b.value || (a.value == b.value && a.id < b.id);
}
bool further(const ProjectedPoint& a, const ProjectedPoint& b) {
  return a.value < b.value || (a.value == b.value && a.id < b.id);
}

// Bounded heap whose top is the worst retained entry.
template <typename Better>
void offer(std::vector<ProjectedPoint>& heap, std::size_t cap, ProjectedPoint p, Better better) {
  if (heap.size() < cap) {
    heap.push_back(p);
    std::push_heap(heap.begin(), heap.end(), better);
  } else if (better(p, heap.front())) {
    std::pop_heap(heap.begin(), heap.end(), better);
    heap.back() = p;
    std::push_heap(heap.begin(), heap.end(), better);
  }
}

template <typename Better>
void top_vectors(std::span<const float> values, std::size_t k, std::uint32_t* out,
                 std::vector<ProjectedPoint>& scratch, Better better) {
  scratch.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    scratch[i] = {static_cast<std::uint32_t>(i), values[i]};
  }
  std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k), scratch.end(),
                    better);
  for (std::size_t i = 0; i < k; ++i) out[i] = scratch[i].id;
}

}  // namespace

SpinnerTransform::SpinnerTransform(std::size_t input_dim, std::size_t num_projections,
                                   std::uint64_t seed)
    : input_dim_(input_dim),
      num_projections_(num_projections),
      chain_size_(std::max(num_projections, next_pow2(input_dim))) {
  validate();
  std::mt19937_64 rng(seed);
  for (auto& layer : signs_) {
    layer.resize(chain_size_);
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < chain_size_; ++i) {
      if (i % 64 == 0) bits = rng();
      layer[i] = (bits >> (i % 64)) & 1U ? 1.0f : -1.0f;
    }
  }
}

SpinnerTransform::SpinnerTransform(std::size_t input_dim, std::size_t num_projections,
                                   std::array<std::vector<float>, 3> signs)
    : input_dim_(input_dim),
      num_projections_(num_projections),
      chain_size_(std::max(num_projections, next_pow2(input_dim))),
      signs_(std::move(signs)) {
  validate();
  for (const auto& layer : signs_) {
    if (layer.size() != chain_size_) {
      throw ConfigError("sign vectors must have length " + std::to_string(chain_size_));
    }
  }
}

void SpinnerTransform::validate() const {
  if (input_dim_ == 0) throw ConfigError("input dimension must be >= 1");
  if (num_projections_ == 0 || !std::has_single_bit(num_projections_)) {
    throw ConfigError("number of projections must be a power of two, got " +
                      std::to_string(num_projections_));
  }
}

float SpinnerTransform::gaussian_scale() const {
  return static_cast<float>(std::sqrt(static_cast<double>(chain_size_)));
}

void SpinnerTransform::project(std::span<const double> x, std::span<float> out,
                               std::span<float> scratch) const {
  if (x.size() != input_dim_) throw ConfigError("projection input dimension mismatch");
  const auto& k = simd::kernels();
  float* buf = scratch.data();
  for (std::size_t i = 0; i < input_dim_; ++i) buf[i] = static_cast<float>(x[i]);
  std::fill(buf + input_dim_, buf + chain_size_, 0.0f);
  for (const auto& layer : signs_) {
    k.multiply(buf, layer.data(), chain_size_);
    k.fwht(buf, chain_size_);
  }
  // Three unnormalized transforms: divide by N^{3/2} once.
  const double n = static_cast<double>(chain_size_);
  k.scale(buf, static_cast<float>(1.0 / (n * std::sqrt(n))), num_projections_);
  std::copy(buf, buf + num_projections_, out.begin());
}

std::vector<float> SpinnerTransform::project(std::span<const double> x) const {
  std::vector<float> out(num_projections_);
  std::vector<float> scratch(chain_size_);
  project(x, out, scratch);
  return out;
}

CeosIndex::CeosIndex(SpinnerTransform transform, std::size_t num_points, std::size_t k,
                     std::size_t m)
    : transform_(std::move(transform)),
      num_points_(num_points),
      k_(k),
      m_(m),
      list_len_(std::min(m, num_points)) {}

CeosIndex build_index(const UnitVectorSet& data, const IndexParams& params) {
  const std::size_t D = params.num_projections;
  if (params.top_vectors == 0 || 2 * params.top_vectors > D) {
    throw ConfigError("top vectors k must satisfy 1 <= k <= D/2");
  }
  if (params.top_points == 0) throw ConfigError("top points m must be >= 1");
  if (data.n == 0) throw ConfigError("cannot index an empty dataset");
  if (data.n > std::numeric_limits<std::uint32_t>::max()) throw ConfigError("too many points");

  CeosIndex index(SpinnerTransform(data.dim, D, params.seed), data.n, params.top_vectors,
                  params.top_points);
  const SpinnerTransform& transform = index.transform_;
  const std::size_t k = index.k_;
  const std::size_t cap = index.list_len_;
  const float gscale = transform.gaussian_scale();
  index.point_vectors_.resize(data.n * 2 * k);

  std::vector<std::vector<ProjectedPoint>> close_heaps(D), far_heaps(D);
  // Projections of one block, stored vector-major so the per-vector pass
  // reads contiguously.
  std::vector<float> block(kBlockSize * D);

  for (std::size_t begin = 0; begin < data.n; begin += kBlockSize) {
    const std::size_t count = std::min(kBlockSize, data.n - begin);
#pragma omp parallel
    {
      std::vector<float> values(D);
      std::vector<float> scratch(transform.chain_size());
      std::vector<ProjectedPoint> order;
#pragma omp for schedule(static)
      for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(count); ++b) {
        const std::size_t point = begin + static_cast<std::size_t>(b);
        transform.project(data.row(point), values, scratch);
        std::uint32_t* out = index.point_vectors_.data() + point * 2 * k;
        top_vectors(values, k, out, order, closer);
        top_vectors(values, k, out + k, order, further);
        for (std::size_t v = 0; v < D; ++v) {
          block[v * kBlockSize + static_cast<std::size_t>(b)] = values[v] * gscale;
        }
      }
#pragma omp for schedule(static)
      for (std::ptrdiff_t vi = 0; vi < static_cast<std::ptrdiff_t>(D); ++vi) {
        const auto v = static_cast<std::size_t>(vi);
        const float* row = block.data() + v * kBlockSize;
        for (std::size_t b = 0; b < count; ++b) {
          const ProjectedPoint p{static_cast<std::uint32_t>(begin + b), row[b]};
          offer(close_heaps[v], cap, p, closer);
          offer(far_heaps[v], cap, p, further);
        }
      }
    }
  }

  index.vector_points_.resize(D * 2 * cap);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t vi = 0; vi < static_cast<std::ptrdiff_t>(D); ++vi) {
    const auto v = static_cast<std::size_t>(vi);
    std::sort(close_heaps[v].begin(), close_heaps[v].end(), closer);
    std::sort(far_heaps[v].begin(), far_heaps[v].end(), further);
    ProjectedPoint* out = index.vector_points_.data() + v * 2 * cap;
    std::copy(close_heaps[v].begin(), close_heaps[v].end(), out);
    std::copy(far_heaps[v].begin(), far_heaps[v].end(), out + cap);
  }
  return index;
}

double estimate_inner_product(std::span<const float> x_projections, const CeosIndex& index,
                              std::size_t q) {
  double score = 0.0;
  for (const auto v : index.closest_vectors(q)) score += x_projections[v];
  for (const auto v : index.furthest_vectors(q)) score -= x_projections[v];
  return score;
}

}  // namespace sdbscan
