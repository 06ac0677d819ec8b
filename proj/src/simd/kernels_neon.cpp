#include "qlink/simd/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#define QLINK_HAVE_NEON_KERNELS 1
#include <arm_neon.h>
#endif

namespace qlink::simd {

#ifdef QLINK_HAVE_NEON_KERNELS
namespace {

using detail::kScalarTable;

void affine_update_neon(double* re, double* im, const double* g_re, const double* g_im,
                        std::size_t n, double keep, double kick) {
  const float64x2_t vkeep = vdupq_n_f64(keep);
  const float64x2_t vkick = vdupq_n_f64(kick);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    // Separate mul/add; vfmaq would round differently from the scalar path.
    const float64x2_t r =
        vaddq_f64(vmulq_f64(vkeep, vld1q_f64(re + j)), vmulq_f64(vkick, vld1q_f64(g_re + j)));
    const float64x2_t i =
        vaddq_f64(vmulq_f64(vkeep, vld1q_f64(im + j)), vmulq_f64(vkick, vld1q_f64(g_im + j)));
    vst1q_f64(re + j, r);
    vst1q_f64(im + j, i);
  }
  kScalarTable.affine_update(re + j, im + j, g_re + j, g_im + j, n - j, keep, kick);
}

void squared_norm_neon(const double* re, const double* im, double* out, std::size_t n) {
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const float64x2_t r = vld1q_f64(re + j);
    const float64x2_t i = vld1q_f64(im + j);
    vst1q_f64(out + j, vaddq_f64(vmulq_f64(r, r), vmulq_f64(i, i)));
  }
  kScalarTable.squared_norm(re + j, im + j, out + j, n - j);
}

// FIXME: Philox still runs the scalar loop on NEON; a vmull_u32 version
// needs an aarch64 machine to verify against the KAT vectors.
const KernelTable kNeonTable{Level::Neon, kScalarTable.philox4x32, &affine_update_neon,
                             &squared_norm_neon};

}  // namespace

const KernelTable* detail::neon_table() { return &kNeonTable; }

#else

const KernelTable* detail::neon_table() { return nullptr; }

#endif

}  // namespace qlink::simd
