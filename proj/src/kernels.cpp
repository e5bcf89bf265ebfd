#include "ssjoin/kernels.hpp"

#if defined(__x86_64__)
#include <immintrin.h>
#endif

namespace ssjoin::kernels {

std::uint32_t intersect_size_scalar(const std::uint32_t* a, std::size_t na,
                                    const std::uint32_t* b, std::size_t nb) {
  std::size_t i = 0, j = 0;
  std::uint32_t count = 0;
  while (i < na && j < nb) {
    if (a[i] == b[j]) {
      ++count;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return count;
}

#if defined(__x86_64__)

// Compares 8-element blocks of a and b all-to-all using lane rotations of b,
// then advances whichever block has the smaller maximum. Elements within each
// input are distinct, so OR-ing the per-rotation equality masks cannot count
// a lane twice.
__attribute__((target("avx2"))) std::uint32_t intersect_size_avx2(
    const std::uint32_t* a, std::size_t na, const std::uint32_t* b,
    std::size_t nb) {
  std::size_t i = 0, j = 0;
  std::uint32_t count = 0;

  if (na >= 8 && nb >= 8) {
    const __m256i rot1 = _mm256_setr_epi32(1, 2, 3, 4, 5, 6, 7, 0);
    while (true) {
      const __m256i va = _mm256_loadu_si256(
          reinterpret_cast<const __m256i*>(a + i));
      __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + j));
      __m256i match = _mm256_cmpeq_epi32(va, vb);
      for (int k = 1; k < 8; ++k) {
        vb = _mm256_permutevar8x32_epi32(vb, rot1);
        match = _mm256_or_si256(match, _mm256_cmpeq_epi32(va, vb));
      }
      count += static_cast<std::uint32_t>(__builtin_popcount(
          _mm256_movemask_ps(_mm256_castsi256_ps(match))));

      const std::uint32_t amax = a[i + 7];
      const std::uint32_t bmax = b[j + 7];
      if (amax <= bmax) i += 8;
      if (bmax <= amax) j += 8;
      if (i + 8 > na || j + 8 > nb) break;
    }
  }

  return count + intersect_size_scalar(a + i, na - i, b + j, nb - j);
}

#endif  // __x86_64__

namespace {

IntersectFn resolve() {
#if defined(__x86_64__)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return intersect_size_avx2;
#endif
  return intersect_size_scalar;
}

IntersectFn dispatched() {
  static const IntersectFn fn = resolve();
  return fn;
}

}  // namespace

std::uint32_t intersect_size(const std::uint32_t* a, std::size_t na,
                             const std::uint32_t* b, std::size_t nb) {
  return dispatched()(a, na, b, nb);
}

const char* active_variant() {
#if defined(__x86_64__)
  if (dispatched() == intersect_size_avx2) return "avx2";
#endif
  return "scalar";
}

std::vector<std::pair<const char*, IntersectFn>> available_variants() {
  std::vector<std::pair<const char*, IntersectFn>> out;
  out.emplace_back("scalar", intersect_size_scalar);
#if defined(__x86_64__)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) out.emplace_back("avx2", intersect_size_avx2);
#endif
  return out;
}

}  // namespace ssjoin::kernels
