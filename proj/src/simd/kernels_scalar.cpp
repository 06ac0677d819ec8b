#include "qlink/rng.hpp"
#include "qlink/simd/kernels.hpp"

namespace qlink::simd {
namespace {

void philox_scalar(const PhiloxBatch& batch, std::size_t n, PhiloxWords out) {
  const rng::PhiloxKey key{batch.key0, batch.key1};
  for (std::size_t j = 0; j < n; ++j) {
    const std::uint64_t index = batch.first_index + j;
    const rng::PhiloxCounter block = rng::philox4x32(
        {batch.ctr0, batch.ctr1, static_cast<std::uint32_t>(index),
         static_cast<std::uint32_t>(index >> 32)},
        key);
    out.w0[j] = block[0];
    out.w1[j] = block[1];
    out.w2[j] = block[2];
    out.w3[j] = block[3];
  }
}

void affine_update_scalar(double* re, double* im, const double* g_re, const double* g_im,
                          std::size_t n, double keep, double kick) {
  for (std::size_t j = 0; j < n; ++j) {
    re[j] = keep * re[j] + kick * g_re[j];
    im[j] = keep * im[j] + kick * g_im[j];
  }
}

void squared_norm_scalar(const double* re, const double* im, double* out, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) out[j] = re[j] * re[j] + im[j] * im[j];
}

}  // namespace

namespace detail {
const KernelTable kScalarTable{Level::Scalar, &philox_scalar, &affine_update_scalar,
                               &squared_norm_scalar};
}  // namespace detail

}  // namespace qlink::simd
