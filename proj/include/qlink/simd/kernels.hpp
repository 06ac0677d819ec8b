#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace qlink::simd {

enum class Level { Scalar, Avx2, Neon };

std::string_view to_string(Level level);

/// Philox4x32-10 key and the two counter words shared by a batch; the other
/// two counter words hold the 64-bit trajectory index.
struct PhiloxBatch {
  std::uint32_t key0 = 0;
  std::uint32_t key1 = 0;
  std::uint32_t ctr0 = 0;  // step index
  std::uint32_t ctr1 = 0;  // stream tag
  std::uint64_t first_index = 0;
};

/// Output words in structure-of-arrays layout: word k of block j goes to
/// words[k][j].
struct PhiloxWords {
  std::uint32_t* w0;
  std::uint32_t* w1;
  std::uint32_t* w2;
  std::uint32_t* w3;
};

// Raw kernel signatures. Every implementation produces bit-identical output.
using PhiloxFn = void (*)(const PhiloxBatch& batch, std::size_t n, PhiloxWords out);
using AffineUpdateFn = void (*)(double* re, double* im, const double* g_re, const double* g_im,
                                std::size_t n, double keep, double kick);
using SquaredNormFn = void (*)(const double* re, const double* im, double* out, std::size_t n);

struct KernelTable {
  Level level;
  PhiloxFn philox4x32;
  AffineUpdateFn affine_update;
  SquaredNormFn squared_norm;
};

/// True when the CPU (and this build) can run the given level.
bool available(Level level);

/// Widest available level.
Level best_available();

/// best_available() unless QLINK_SIMD=scalar|avx2|neon says otherwise. An
/// unavailable request falls back to scalar.
Level active_level();

/// Throws std::invalid_argument if the level is not available.
const KernelTable& kernels(Level level);

// Span front-ends over a kernel table.

/// u ← keep·u + kick·g, componentwise on split real/imaginary arrays.
void affine_update(const KernelTable& k, std::span<double> re, std::span<double> im,
                   std::span<const double> g_re, std::span<const double> g_im, double keep,
                   double kick);

/// out = re² + im².
void squared_norm(const KernelTable& k, std::span<const double> re, std::span<const double> im,
                  std::span<double> out);

// Per-level tables, defined in the kernels_*.cpp files.
namespace detail {
extern const KernelTable kScalarTable;
const KernelTable* avx2_table();  // nullptr when not compiled in
const KernelTable* neon_table();  // nullptr when not compiled in

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;
inline constexpr int kPhiloxRounds = 10;
}  // namespace detail

}  // namespace qlink::simd
