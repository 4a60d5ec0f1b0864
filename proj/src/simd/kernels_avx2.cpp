#include "superhedge/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define SUPERHEDGE_HAVE_AVX2 1
#endif

namespace superhedge::simd {

#if SUPERHEDGE_HAVE_AVX2

namespace {

__attribute__((target("avx2"))) void stencil_avx2(std::span<const double> v,
                                                  std::span<const Tap> taps, std::size_t begin,
                                                  std::size_t end, std::span<double> out) {
  const double* base = v.data();
  std::size_t i = begin;
  for (; i + 4 <= end; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (const Tap& t : taps) {
      const __m256d w = _mm256_set1_pd(t.weight);
      const __m256d x = _mm256_loadu_pd(base + static_cast<std::ptrdiff_t>(i) + t.offset);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(w, x));
    }
    _mm256_storeu_pd(out.data() + i, acc);
  }
  for (; i < end; ++i) {
    double acc = 0.0;
    for (const Tap& t : taps) acc = acc + t.weight * base[static_cast<std::ptrdiff_t>(i) + t.offset];
    out[i] = acc;
  }
}

__attribute__((target("avx2"))) void max_update_avx2(std::span<double> best,
                                                     std::span<std::uint32_t> arg,
                                                     std::span<const double> cand,
                                                     std::uint32_t index) {
  const std::size_t n = cand.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d c = _mm256_loadu_pd(cand.data() + i);
    const __m256d b = _mm256_loadu_pd(best.data() + i);
    const __m256d gt = _mm256_cmp_pd(c, b, _CMP_GT_OQ);
    int mask = _mm256_movemask_pd(gt);
    if (mask == 0) continue;
    _mm256_storeu_pd(best.data() + i, _mm256_blendv_pd(b, c, gt));
    while (mask != 0) {
      const int lane = __builtin_ctz(static_cast<unsigned>(mask));
      arg[i + static_cast<std::size_t>(lane)] = index;
      mask &= mask - 1;
    }
  }
  for (; i < n; ++i) {
    if (cand[i] > best[i]) {
      best[i] = cand[i];
      arg[i] = index;
    }
  }
}

constexpr KernelTable kAvx2{"avx2", &stencil_avx2, &max_update_avx2};

}  // namespace

const KernelTable* avx2_kernels() {
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &kAvx2 : nullptr;
}

#else

const KernelTable* avx2_kernels() { return nullptr; }

#endif

}  // namespace superhedge::simd
