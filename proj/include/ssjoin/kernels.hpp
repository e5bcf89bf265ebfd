#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace ssjoin::kernels {

// Size of the intersection of two strictly ascending arrays of element ids.
using IntersectFn = std::uint32_t (*)(const std::uint32_t*, std::size_t,
                                      const std::uint32_t*, std::size_t);

// Scalar reference kernel (two-pointer merge).
std::uint32_t intersect_size_scalar(const std::uint32_t* a, std::size_t na,
                                    const std::uint32_t* b, std::size_t nb);

#if defined(__x86_64__)
// AVX2 block-wise all-pairs variant. Requires avx2 at runtime.
std::uint32_t intersect_size_avx2(const std::uint32_t* a, std::size_t na,
                                  const std::uint32_t* b, std::size_t nb);
#endif

// Dispatched entry point: picks the widest variant the CPU supports.
std::uint32_t intersect_size(const std::uint32_t* a, std::size_t na,
                             const std::uint32_t* b, std::size_t nb);

inline std::uint32_t intersect_size(const std::vector<std::uint32_t>& a,
                                    const std::vector<std::uint32_t>& b) {
  return intersect_size(a.data(), a.size(), b.data(), b.size());
}

// Name of the variant intersect_size dispatches to ("scalar", "avx2").
const char* active_variant();

// All variants runnable on this machine, for equivalence testing.
std::vector<std::pair<const char*, IntersectFn>> available_variants();

}  // namespace ssjoin::kernels
