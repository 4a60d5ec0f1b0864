#pragma once
// Independent reference prices used by the tests: Black-Scholes closed form,
// a Cox-Ross-Rubinstein tree, and the compound-Poisson mixture for a single
// deterministic jump size.

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double bs_call(double s, double k, double sigma, double t) {
  if (sigma <= 0.0 || t <= 0.0) return std::max(s - k, 0.0);
  const double sd = sigma * std::sqrt(t);
  const double d1 = (std::log(s / k) + 0.5 * sd * sd) / sd;
  return s * norm_cdf(d1) - k * norm_cdf(d1 - sd);
}

inline double bs_delta(double s, double k, double sigma, double t) {
  if (sigma <= 0.0 || t <= 0.0) return s > k ? 1.0 : 0.0;
  const double sd = sigma * std::sqrt(t);
  return norm_cdf((std::log(s / k) + 0.5 * sd * sd) / sd);
}

/// European call on a zero-rate CRR tree.
inline double crr_call(double s, double k, double sigma, double t, int steps) {
  const double dt = t / steps;
  const double u = std::exp(sigma * std::sqrt(dt));
  const double d = 1.0 / u;
  const double p = (1.0 - d) / (u - d);
  std::vector<double> v(static_cast<std::size_t>(steps) + 1);
  for (int j = 0; j <= steps; ++j) v[j] = std::max(s * std::pow(u, 2 * j - steps) - k, 0.0);
  for (int n = steps - 1; n >= 0; --n) {
    for (int j = 0; j <= n; ++j) v[j] = p * v[j + 1] + (1.0 - p) * v[j];
  }
  return v[0];
}

/// Call under S = E(σW + z·(N - λt)) style dynamics: Brownian part plus a
/// Poisson(λ) number of relative jumps of size z, compensated.
inline double jump_call(double s, double k, double sigma, double z, double lambda, double t) {
  double total = 0.0;
  double pn = std::exp(-lambda * t);
  for (int n = 0; n < 60; ++n) {
    const double sn = s * std::pow(1.0 + z, n) * std::exp(-lambda * z * t);
    total += pn * bs_call(sn, k, sigma, t);
    pn *= lambda * t / (n + 1);
  }
  return total;
}

}  // namespace oracle
