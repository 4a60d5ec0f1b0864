#pragma once
// Data-parallel inner loops of the lattice scheme.
//
// Every variant evaluates the same operations in the same order (no FMA), so
// results are bit-identical across scalar, AVX2 and NEON builds. The active
// table is picked once at startup from CPU features; SUPERHEDGE_SIMD=scalar
// forces the reference path.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace superhedge::simd {

/// One stencil coefficient: contributes weight·v[i + offset] to out[i].
struct Tap {
  std::ptrdiff_t offset;
  double weight;
};

/// out[i] = Σ_t weight_t·v[i + offset_t] for i in [begin, end), accumulated
/// in tap order. Every referenced index must lie inside v.
using StencilFn = void (*)(std::span<const double> v, std::span<const Tap> taps, std::size_t begin,
                           std::size_t end, std::span<double> out);

/// Where cand[i] > best[i]: best[i] = cand[i], arg[i] = index. Strict
/// comparison, so the lowest index wins ties when called in index order.
using MaxUpdateFn = void (*)(std::span<double> best, std::span<std::uint32_t> arg,
                             std::span<const double> cand, std::uint32_t index);

struct KernelTable {
  std::string_view name;
  StencilFn stencil;
  MaxUpdateFn max_update;
};

const KernelTable& scalar_kernels();
/// nullptr when not built for this architecture or unsupported by the CPU.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

/// Table used by the pricer.
const KernelTable& active_kernels();
/// Overrides the active table ("scalar", "avx2", "neon"); returns false if
/// the requested variant is unavailable.
bool select_kernels(std::string_view name);

}  // namespace superhedge::simd
