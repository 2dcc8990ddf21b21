#pragma once

#include <cstddef>
#include <string_view>

namespace sdbscan::simd {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

// One instruction-set variant of the inner-loop kernels. The scalar table is
// the reference; every other table must agree with it to rounding error.
struct KernelTable {
  Isa isa;

  // Σ x_i y_i
  double (*dot)(const double* x, const double* y, std::size_t n);
  // Σ |x_i - y_i|
  double (*l1)(const double* x, const double* y, std::size_t n);
  // Σ (x_i - y_i)^2
  double (*l2_squared)(const double* x, const double* y, std::size_t n);
  // Σ 2 x_i y_i / (x_i + y_i), terms with x_i + y_i = 0 contribute 0
  double (*chi2_similarity)(const double* x, const double* y, std::size_t n);

  // In-place unnormalized Walsh-Hadamard transform; n must be a power of two.
  void (*fwht)(float* x, std::size_t n);
  // x_i *= y_i
  void (*multiply)(float* x, const float* y, std::size_t n);
  // x_i *= s
  void (*scale)(float* x, float s, std::size_t n);
};

const KernelTable& scalar_kernels();

// Table for a specific ISA, or nullptr when the CPU (or the build) lacks it.
const KernelTable* kernels_for(Isa isa);

// Best supported table. Setting SDBSCAN_SIMD=scalar in the environment pins
// the scalar reference.
const KernelTable& kernels();

namespace detail {
#if defined(SDBSCAN_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif
}  // namespace detail

}  // namespace sdbscan::simd
