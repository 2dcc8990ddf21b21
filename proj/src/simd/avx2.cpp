// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>

#include "sdbscan/simd/kernels.hpp"

namespace sdbscan::simd::detail {
namespace {

inline double horizontal_sum(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  }
  double res = horizontal_sum(acc);
  for (; i < n; ++i) res += x[i] * y[i];
  return res;
}

double l1(const double* x, const double* y, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign_mask, diff));
  }
  double res = horizontal_sum(acc);
  for (; i < n; ++i) res += std::abs(x[i] - y[i]);
  return res;
}

double l2_squared(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_fmadd_pd(diff, diff, acc);
  }
  double res = horizontal_sum(acc);
  for (; i < n; ++i) {
    const double diff = x[i] - y[i];
    res += diff * diff;
  }
  return res;
}

double chi2_similarity(const double* x, const double* y, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  __m256d acc = zero;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    const __m256d sum = _mm256_add_pd(vx, vy);
    const __m256d positive = _mm256_cmp_pd(sum, zero, _CMP_GT_OQ);
    const __m256d den = _mm256_blendv_pd(one, sum, positive);
    const __m256d num = _mm256_mul_pd(two, _mm256_mul_pd(vx, vy));
    acc = _mm256_add_pd(acc, _mm256_and_pd(_mm256_div_pd(num, den), positive));
  }
  double res = horizontal_sum(acc);
  for (; i < n; ++i) {
    const double sum = x[i] + y[i];
    if (sum > 0.0) res += 2.0 * x[i] * y[i] / sum;
  }
  return res;
}

// Butterfly inside one register for stride h in {1, 2, 4}: even slots get
// a + b, odd slots get a - b where a is the lower partner.
template <int Imm, int Blend>
inline __m256 in_lane_stage(__m256 v) {
  const __m256 swapped = _mm256_permute_ps(v, Imm);
  return _mm256_blend_ps(_mm256_add_ps(v, swapped), _mm256_sub_ps(swapped, v), Blend);
}

void fwht(float* x, std::size_t n) {
  if (n < 8) {
    scalar_kernels().fwht(x, n);
    return;
  }
  for (std::size_t i = 0; i < n; i += 8) {
    __m256 v = _mm256_loadu_ps(x + i);
    v = in_lane_stage<0b10110001, 0b10101010>(v);
    v = in_lane_stage<0b01001110, 0b11001100>(v);
    const __m256 swapped = _mm256_permute2f128_ps(v, v, 0x01);
    v = _mm256_blend_ps(_mm256_add_ps(v, swapped), _mm256_sub_ps(swapped, v), 0b11110000);
    _mm256_storeu_ps(x + i, v);
  }
  for (std::size_t h = 8; h < n; h *= 2) {
    for (std::size_t i = 0; i < n; i += 2 * h) {
      for (std::size_t j = i; j < i + h; j += 8) {
        const __m256 a = _mm256_loadu_ps(x + j);
        const __m256 b = _mm256_loadu_ps(x + j + h);
        _mm256_storeu_ps(x + j, _mm256_add_ps(a, b));
        _mm256_storeu_ps(x + j + h, _mm256_sub_ps(a, b));
      }
    }
  }
}

void multiply(float* x, const float* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(x + i, _mm256_mul_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
  }
  for (; i < n; ++i) x[i] *= y[i];
}

void scale(float* x, float s, std::size_t n) {
  const __m256 vs = _mm256_set1_ps(s);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) _mm256_storeu_ps(x + i, _mm256_mul_ps(_mm256_loadu_ps(x + i), vs));
  for (; i < n; ++i) x[i] *= s;
}

}  // namespace

const KernelTable& avx2_kernels() {
  static const KernelTable table{Isa::avx2, dot,  l1,       l2_squared, chi2_similarity,
                                 fwht,      multiply, scale};
  return table;
}

}  // namespace sdbscan::simd::detail
