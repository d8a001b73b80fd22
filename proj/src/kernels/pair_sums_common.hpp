#pragma once

// Shared pieces of the pair-sum kernel variants. Both variants must perform
// the same floating-point operations in the same order; kernel sources are
// compiled with -ffp-contract=off so that holds.

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "egin/errors.hpp"
#include "egin/kernels.hpp"

namespace egin::kernels::detail {

inline constexpr double kBig = 0x1p600;
inline constexpr double kSmall = 0x1p-600;

inline std::size_t validate(const PairSumBatch& b) {
  require(b.xs.size() == b.ys.size(), "pair_sums: xs/ys length mismatch");
  require(b.tau >= 0.0 && b.tau <= 1.0, "pair_sums: tau must lie in [0, 1]");
  if (b.n_terms == 0) return 0;
  require(b.weights.size() % b.n_terms == 0, "pair_sums: weights not a multiple of n_terms");
  const std::size_t n_sets = b.weights.size() / b.n_terms;
  require(b.out_log.size() >= n_sets * b.xs.size(), "pair_sums: output too small");
  return n_sets;
}

// Per-step recurrence constants: a[m] = sqrt(m-1) tau, b[m] = 1/sqrt(m).
struct Coefficients {
  std::vector<double> a, b;
  Coefficients(std::size_t K, double tau) : a(K + 1, 0.0), b(K + 1, 0.0) {
    for (std::size_t m = 2; m <= K; ++m) {
      a[m] = std::sqrt(static_cast<double>(m - 1)) * tau;
      b[m] = 1.0 / std::sqrt(static_cast<double>(m));
    }
  }
};

// Rescale one lane after |g_m|^2 left [2^-600, 2^600]. `sums` is strided so
// the AVX2 variant can pass its lane-interleaved accumulator.
inline void rescale_lane(double mag2, double& gr, double& gi, double& pr, double& pi, int& d,
                         int& es, double& tscale, double* sums, std::size_t stride,
                         std::size_t n_sets) {
  const double f = mag2 > kBig ? 0x1p-300 : 0x1p300;
  d += mag2 > kBig ? 600 : -600;
  gr *= f;
  gi *= f;
  pr *= f;
  pi *= f;
  if (d > 600) {
    for (std::size_t j = 0; j < n_sets; ++j) sums[j * stride] *= 0x1p-600;
    es += 600;
    d -= 600;
  }
  tscale = std::ldexp(1.0, d);
}

inline double finish(double sum, int es) {
  if (sum <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(sum) + es * std::numbers::ln2;
}

}  // namespace egin::kernels::detail
