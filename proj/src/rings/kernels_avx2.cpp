// Built with -mavx2; only reached when the CPU reports AVX2 at runtime.
#include <immintrin.h>

#include "wz/kernels.hpp"

namespace wz::kernels {

void axpy_avx2(uint64_t* acc, const uint32_t* row, uint32_t s, size_t n) {
  const __m256i vs = _mm256_set1_epi64x(s);
  size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    // zero-extend four 32-bit residues into 64-bit lanes
    __m128i r = _mm_loadu_si128(reinterpret_cast<const __m128i*>(row + k));
    __m256i r64 = _mm256_cvtepu32_epi64(r);
    __m256i prod = _mm256_mul_epu32(r64, vs);
    __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(acc + k));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(acc + k),
                        _mm256_add_epi64(a, prod));
  }
  const uint64_t s64 = s;
  for (; k < n; ++k) acc[k] += s64 * row[k];
}

}  // namespace wz::kernels
