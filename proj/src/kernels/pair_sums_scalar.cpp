#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "egin/errors.hpp"
#include "egin/kernels.hpp"
#include "pair_sums_common.hpp"

namespace egin::kernels {

void pair_sums_scalar(const PairSumBatch& b) {
  const std::size_t n_points = b.xs.size();
  const std::size_t n_sets = detail::validate(b);
  if (n_points == 0 || n_sets == 0) return;
  const std::size_t K = b.n_terms;
  const detail::Coefficients coef(K, b.tau);

  std::vector<double> sums(n_sets);
  for (std::size_t p = 0; p < n_points; ++p) {
    const double x = b.xs[p];
    const double y = b.ys[p];
    double pr = 1.0, pi = 0.0;  // g_{m-1}
    double gr = x, gi = y;      // g_m
    int d = 0;                  // t_m enters the sums as |g|^2 * 2^d
    double tscale = 1.0;
    int es = 0;                 // sums carry an extra factor 2^es
    for (std::size_t j = 0; j < n_sets; ++j) sums[j] = b.weights[j * K];
    for (std::size_t m = 1; m < K; ++m) {
      if (m >= 2) {
        const double a = coef.a[m];
        const double s = coef.b[m];
        const double nr = (x * gr - y * gi - a * pr) * s;
        const double ni = (x * gi + y * gr - a * pi) * s;
        pr = gr;
        pi = gi;
        gr = nr;
        gi = ni;
      }
      const double mag2 = gr * gr + gi * gi;
      const double t = mag2 * tscale;
      for (std::size_t j = 0; j < n_sets; ++j) sums[j] += b.weights[j * K + m] * t;
      if (mag2 > detail::kBig || (mag2 < detail::kSmall && mag2 > 0.0)) {
        detail::rescale_lane(mag2, gr, gi, pr, pi, d, es, tscale, sums.data(), 1, n_sets);
      }
    }
    for (std::size_t j = 0; j < n_sets; ++j) {
      b.out_log[j * n_points + p] = detail::finish(sums[j], es);
    }
  }
}

void column_norms2_scalar(const double* a, std::size_t rows, std::size_t cols, std::size_t ld,
                          double* out) {
  for (std::size_t c = 0; c < cols; ++c) {
    const double* col = a + 2 * c * ld;
    double s = 0.0;
    for (std::size_t r = 0; r < 2 * rows; ++r) s += col[r] * col[r];
    out[c] = s;
  }
}

std::size_t box_hits_scalar(const double* re, const double* im, std::size_t n, double cx,
                            double cy, double hx, double hy, unsigned char* hit) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool h = std::abs(re[i] - cx) <= hx && std::abs(im[i] - cy) <= hy;
    hit[i] = h ? 1 : 0;
    count += h;
  }
  return count;
}

}  // namespace egin::kernels
