#include <cstdlib>
#include <stdexcept>
#include <string>

#include "qlink/simd/kernels.hpp"

namespace qlink::simd {

std::string_view to_string(Level level) {
  switch (level) {
    case Level::Scalar: return "scalar";
    case Level::Avx2: return "avx2";
    case Level::Neon: return "neon";
  }
  return "scalar";
}

bool available(Level level) {
  switch (level) {
    case Level::Scalar:
      return true;
    case Level::Avx2:
#if defined(__x86_64__)
      return detail::avx2_table() != nullptr && __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Level::Neon:
      return detail::neon_table() != nullptr;
  }
  return false;
}

Level best_available() {
  if (available(Level::Avx2)) return Level::Avx2;
  if (available(Level::Neon)) return Level::Neon;
  return Level::Scalar;
}

Level active_level() {
  const char* env = std::getenv("QLINK_SIMD");
  if (env == nullptr) return best_available();
  const std::string_view wanted{env};
  for (Level level : {Level::Scalar, Level::Avx2, Level::Neon}) {
    if (wanted == to_string(level)) return available(level) ? level : Level::Scalar;
  }
  return best_available();
}

const KernelTable& kernels(Level level) {
  if (!available(level))
    throw std::invalid_argument("SIMD level '" + std::string(to_string(level)) +
                                "' is not available on this machine");
  switch (level) {
    case Level::Avx2: return *detail::avx2_table();
    case Level::Neon: return *detail::neon_table();
    case Level::Scalar: break;
  }
  return detail::kScalarTable;
}

void affine_update(const KernelTable& k, std::span<double> re, std::span<double> im,
                   std::span<const double> g_re, std::span<const double> g_im, double keep,
                   double kick) {
  if (im.size() != re.size() || g_re.size() != re.size() || g_im.size() != re.size())
    throw std::invalid_argument("affine_update: span sizes differ");
  k.affine_update(re.data(), im.data(), g_re.data(), g_im.data(), re.size(), keep, kick);
}

void squared_norm(const KernelTable& k, std::span<const double> re, std::span<const double> im,
                  std::span<double> out) {
  if (im.size() != re.size() || out.size() != re.size())
    throw std::invalid_argument("squared_norm: span sizes differ");
  k.squared_norm(re.data(), im.data(), out.data(), re.size());
}

}  // namespace qlink::simd
