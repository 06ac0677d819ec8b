#include "qlink/simd/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__)
#define QLINK_HAVE_AVX2_KERNELS 1
#include <immintrin.h>
#endif

namespace qlink::simd {

#ifdef QLINK_HAVE_AVX2_KERNELS
namespace {

using namespace detail;

// Four Philox blocks per iteration, one per 64-bit lane. Each counter word
// sits in the low half of its lane so _mm256_mul_epu32 gives the full
// 32x32->64 product.
void philox_avx2(const PhiloxBatch& batch, std::size_t n, PhiloxWords out) {
  const __m256i mask32 = _mm256_set1_epi64x(0xFFFFFFFFll);
  const __m256i m0 = _mm256_set1_epi64x(kPhiloxM0);
  const __m256i m1 = _mm256_set1_epi64x(kPhiloxM1);
  const __m256i lane = _mm256_setr_epi64x(0, 1, 2, 3);
  // Gathers the low 32 bits of each 64-bit lane into the low 128 bits.
  const __m256i pack = _mm256_setr_epi32(0, 2, 4, 6, 1, 3, 5, 7);

  std::uint32_t k0[kPhiloxRounds];
  std::uint32_t k1[kPhiloxRounds];
  k0[0] = batch.key0;
  k1[0] = batch.key1;
  for (int r = 1; r < kPhiloxRounds; ++r) {
    k0[r] = k0[r - 1] + kPhiloxW0;
    k1[r] = k1[r - 1] + kPhiloxW1;
  }

  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256i index =
        _mm256_add_epi64(_mm256_set1_epi64x(static_cast<long long>(batch.first_index + j)), lane);
    __m256i c0 = _mm256_set1_epi64x(batch.ctr0);
    __m256i c1 = _mm256_set1_epi64x(batch.ctr1);
    __m256i c2 = _mm256_and_si256(index, mask32);
    __m256i c3 = _mm256_srli_epi64(index, 32);

    for (int r = 0; r < kPhiloxRounds; ++r) {
      const __m256i p0 = _mm256_mul_epu32(m0, c0);
      const __m256i p1 = _mm256_mul_epu32(m1, c2);
      const __m256i hi0 = _mm256_srli_epi64(p0, 32);
      const __m256i lo0 = _mm256_and_si256(p0, mask32);
      const __m256i hi1 = _mm256_srli_epi64(p1, 32);
      const __m256i lo1 = _mm256_and_si256(p1, mask32);
      const __m256i key0 = _mm256_set1_epi64x(k0[r]);
      const __m256i key1 = _mm256_set1_epi64x(k1[r]);
      c0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), key0);
      c1 = lo1;
      c2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), key1);
      c3 = lo0;
    }

    auto store = [&](std::uint32_t* dst, __m256i v) {
      _mm_storeu_si128(reinterpret_cast<__m128i*>(dst + j),
                       _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(v, pack)));
    };
    store(out.w0, c0);
    store(out.w1, c1);
    store(out.w2, c2);
    store(out.w3, c3);
  }

  if (j < n) {
    PhiloxBatch tail = batch;
    tail.first_index = batch.first_index + j;
    kScalarTable.philox4x32(tail, n - j,
                            {out.w0 + j, out.w1 + j, out.w2 + j, out.w3 + j});
  }
}

void affine_update_avx2(double* re, double* im, const double* g_re, const double* g_im,
                        std::size_t n, double keep, double kick) {
  const __m256d vkeep = _mm256_set1_pd(keep);
  const __m256d vkick = _mm256_set1_pd(kick);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d r = _mm256_add_pd(_mm256_mul_pd(vkeep, _mm256_loadu_pd(re + j)),
                                    _mm256_mul_pd(vkick, _mm256_loadu_pd(g_re + j)));
    const __m256d i = _mm256_add_pd(_mm256_mul_pd(vkeep, _mm256_loadu_pd(im + j)),
                                    _mm256_mul_pd(vkick, _mm256_loadu_pd(g_im + j)));
    _mm256_storeu_pd(re + j, r);
    _mm256_storeu_pd(im + j, i);
  }
  kScalarTable.affine_update(re + j, im + j, g_re + j, g_im + j, n - j, keep, kick);
}

void squared_norm_avx2(const double* re, const double* im, double* out, std::size_t n) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d r = _mm256_loadu_pd(re + j);
    const __m256d i = _mm256_loadu_pd(im + j);
    _mm256_storeu_pd(out + j, _mm256_add_pd(_mm256_mul_pd(r, r), _mm256_mul_pd(i, i)));
  }
  kScalarTable.squared_norm(re + j, im + j, out + j, n - j);
}

const KernelTable kAvx2Table{Level::Avx2, &philox_avx2, &affine_update_avx2,
                             &squared_norm_avx2};

}  // namespace

const KernelTable* detail::avx2_table() { return &kAvx2Table; }

#else

const KernelTable* detail::avx2_table() { return nullptr; }

#endif

}  // namespace qlink::simd
