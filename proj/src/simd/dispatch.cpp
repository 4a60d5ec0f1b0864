#include <atomic>
#include <cstdlib>
#include <string_view>

#include "superhedge/simd/kernels.hpp"

namespace superhedge::simd {

namespace {

const KernelTable* detect() {
  if (const char* env = std::getenv("SUPERHEDGE_SIMD"); env && std::string_view(env) == "scalar") {
    return &scalar_kernels();
  }
  if (const auto* t = avx2_kernels()) return t;
  if (const auto* t = neon_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> active{detect()};
  return active;
}

}  // namespace

const KernelTable& active_kernels() { return *slot().load(std::memory_order_acquire); }

bool select_kernels(std::string_view name) {
  const KernelTable* t = nullptr;
  if (name == "scalar") t = &scalar_kernels();
  else if (name == "avx2") t = avx2_kernels();
  else if (name == "neon") t = neon_kernels();
  if (t == nullptr) return false;
  slot().store(t, std::memory_order_release);
  return true;
}

}  // namespace superhedge::simd
