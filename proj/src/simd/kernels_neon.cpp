#include "superhedge/simd/kernels.hpp"

#if defined(__aarch64__) || defined(_M_ARM64)
#include <arm_neon.h>
#define SUPERHEDGE_HAVE_NEON 1
#endif

namespace superhedge::simd {

#if SUPERHEDGE_HAVE_NEON

namespace {

void stencil_neon(std::span<const double> v, std::span<const Tap> taps, std::size_t begin,
                  std::size_t end, std::span<double> out) {
  const double* base = v.data();
  std::size_t i = begin;
  for (; i + 2 <= end; i += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (const Tap& t : taps) {
      const float64x2_t x = vld1q_f64(base + static_cast<std::ptrdiff_t>(i) + t.offset);
      acc = vaddq_f64(acc, vmulq_f64(vdupq_n_f64(t.weight), x));
    }
    vst1q_f64(out.data() + i, acc);
  }
  for (; i < end; ++i) {
    double acc = 0.0;
    for (const Tap& t : taps) acc = acc + t.weight * base[static_cast<std::ptrdiff_t>(i) + t.offset];
    out[i] = acc;
  }
}

void max_update_neon(std::span<double> best, std::span<std::uint32_t> arg,
                     std::span<const double> cand, std::uint32_t index) {
  const std::size_t n = cand.size();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t c = vld1q_f64(cand.data() + i);
    const float64x2_t b = vld1q_f64(best.data() + i);
    const uint64x2_t gt = vcgtq_f64(c, b);
    vst1q_f64(best.data() + i, vbslq_f64(gt, c, b));
    if (vgetq_lane_u64(gt, 0) != 0) arg[i] = index;
    if (vgetq_lane_u64(gt, 1) != 0) arg[i + 1] = index;
  }
  for (; i < n; ++i) {
    if (cand[i] > best[i]) {
      best[i] = cand[i];
      arg[i] = index;
    }
  }
}

constexpr KernelTable kNeon{"neon", &stencil_neon, &max_update_neon};

}  // namespace

const KernelTable* neon_kernels() { return &kNeon; }

#else

const KernelTable* neon_kernels() { return nullptr; }

#endif

}  // namespace superhedge::simd
