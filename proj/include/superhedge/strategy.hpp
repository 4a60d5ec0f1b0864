#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace superhedge {

enum class Provenance { kAnalytic, kEmpirical, kGiven };

constexpr std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kAnalytic: return "analytic";
    case Provenance::kEmpirical: return "empirical";
    case Provenance::kGiven: return "given";
  }
  return "unknown";
}

/// Hedge ratios H[k] ∈ R^d for the steps k = 0..N-1; H[k] is held over
/// (t_k, t_{k+1}] and may only depend on information up to t_k.
struct Strategy {
  std::size_t dim = 1;
  std::vector<double> h;  // row-major, steps × dim
  Provenance provenance = Provenance::kGiven;

  Strategy() = default;
  Strategy(std::size_t steps, std::size_t d, Provenance p = Provenance::kGiven)
      : dim(d), h(steps * d, 0.0), provenance(p) {}

  std::size_t steps() const noexcept { return dim == 0 ? 0 : h.size() / dim; }
  std::span<double> at(std::size_t k) { return {h.data() + k * dim, dim}; }
  std::span<const double> at(std::size_t k) const { return {h.data() + k * dim, dim}; }
};

}  // namespace superhedge
