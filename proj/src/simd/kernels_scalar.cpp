#include "superhedge/simd/kernels.hpp"

namespace superhedge::simd {

namespace {

void stencil_scalar(std::span<const double> v, std::span<const Tap> taps, std::size_t begin,
                    std::size_t end, std::span<double> out) {
  const double* base = v.data();
  for (std::size_t i = begin; i < end; ++i) {
    double acc = 0.0;
    for (const Tap& t : taps) acc = acc + t.weight * base[static_cast<std::ptrdiff_t>(i) + t.offset];
    out[i] = acc;
  }
}

void max_update_scalar(std::span<double> best, std::span<std::uint32_t> arg,
                       std::span<const double> cand, std::uint32_t index) {
  for (std::size_t i = 0; i < cand.size(); ++i) {
    if (cand[i] > best[i]) {
      best[i] = cand[i];
      arg[i] = index;
    }
  }
}

constexpr KernelTable kScalar{"scalar", &stencil_scalar, &max_update_scalar};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace superhedge::simd
