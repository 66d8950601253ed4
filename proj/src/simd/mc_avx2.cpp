#include <immintrin.h>

#include "mc_kernel.hpp"

namespace slabkit::simd {

bool avx2_available() { return __builtin_cpu_supports("avx2"); }

__attribute__((target("avx2"))) void mc_block_avx2(const McBlock& b, McSums& out) {
  const std::size_t full = b.n - b.n % 4;
  __m256d sum = _mm256_loadu_pd(out.sum);
  __m256d sumsq = _mm256_loadu_pd(out.sumsq);
  __m256i count = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(out.count));
  const __m256d half_t = _mm256_set1_pd(b.half_t);
  const __m256d neg_half_t = _mm256_set1_pd(-b.half_t);
  const __m256d one = _mm256_set1_pd(1.0);
  for (std::size_t k = 0; k < full; k += 4) {
    __m256d inside = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
    for (std::size_t f = 0; f < b.n_facets; ++f) {
      __m256d s = _mm256_mul_pd(_mm256_set1_pd(b.normals[f * b.dim]), _mm256_loadu_pd(b.xs + k));
      for (std::size_t i = 1; i < b.dim; ++i)
        s = _mm256_add_pd(s, _mm256_mul_pd(_mm256_set1_pd(b.normals[f * b.dim + i]),
                                           _mm256_loadu_pd(b.xs + i * b.n + k)));
      inside = _mm256_and_pd(inside, _mm256_cmp_pd(s, _mm256_set1_pd(b.offsets[f]), _CMP_LE_OQ));
    }
    __m256d s = _mm256_mul_pd(_mm256_set1_pd(b.a[0]), _mm256_loadu_pd(b.xs + k));
    for (std::size_t i = 1; i < b.dim; ++i)
      s = _mm256_add_pd(s, _mm256_mul_pd(_mm256_set1_pd(b.a[i]), _mm256_loadu_pd(b.xs + i * b.n + k)));
    inside = _mm256_and_pd(inside, _mm256_cmp_pd(s, half_t, _CMP_LE_OQ));
    inside = _mm256_and_pd(inside, _mm256_cmp_pd(s, neg_half_t, _CMP_GE_OQ));
    __m256d f = one;
    if (b.M > 0) {
      f = _mm256_setzero_pd();
      for (std::size_t i = 0; i < b.dim; ++i) {
        const __m256d x = _mm256_loadu_pd(b.xs + i * b.n + k);
        __m256d p = x;
        for (unsigned m = 1; m < b.M; ++m) p = _mm256_mul_pd(p, x);
        f = _mm256_add_pd(f, p);
      }
    }
    f = _mm256_and_pd(f, inside);
    sum = _mm256_add_pd(sum, f);
    sumsq = _mm256_add_pd(sumsq, _mm256_mul_pd(f, f));
    count = _mm256_sub_epi64(count, _mm256_castpd_si256(inside));
  }
  _mm256_storeu_pd(out.sum, sum);
  _mm256_storeu_pd(out.sumsq, sumsq);
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.count), count);
  for (std::size_t k = full; k < b.n; ++k) mc_sample(b, k, out);
}

}  // namespace slabkit::simd
