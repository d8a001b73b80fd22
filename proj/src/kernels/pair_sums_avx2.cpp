#include "egin/kernels.hpp"

#if defined(EGIN_HAVE_AVX2)

#include <immintrin.h>

#include <array>
#include <cmath>
#include <vector>

#include "pair_sums_common.hpp"

namespace egin::kernels {

namespace {
constexpr std::size_t kLanes = 4;
constexpr std::size_t kMaxSets = 8;
}  // namespace

void pair_sums_avx2(const PairSumBatch& b) {
  const std::size_t n_points = b.xs.size();
  const std::size_t n_sets = detail::validate(b);
  if (n_points == 0 || n_sets == 0) return;
  if (n_sets > kMaxSets) {
    pair_sums_scalar(b);
    return;
  }
  const std::size_t K = b.n_terms;
  const detail::Coefficients coef(K, b.tau);
  const std::size_t n_vec = n_points - n_points % kLanes;

  const __m256d big = _mm256_set1_pd(detail::kBig);
  const __m256d small = _mm256_set1_pd(detail::kSmall);
  const __m256d zero = _mm256_setzero_pd();

  for (std::size_t p0 = 0; p0 < n_vec; p0 += kLanes) {
    const __m256d x = _mm256_loadu_pd(&b.xs[p0]);
    const __m256d y = _mm256_loadu_pd(&b.ys[p0]);
    __m256d pr = _mm256_set1_pd(1.0), pi = zero;
    __m256d gr = x, gi = y;
    __m256d tscale = _mm256_set1_pd(1.0);
    std::array<int, kLanes> d{};
    std::array<int, kLanes> es{};
    __m256d sums[kMaxSets];
    for (std::size_t j = 0; j < n_sets; ++j) sums[j] = _mm256_set1_pd(b.weights[j * K]);

    for (std::size_t m = 1; m < K; ++m) {
      if (m >= 2) {
        const __m256d a = _mm256_set1_pd(coef.a[m]);
        const __m256d s = _mm256_set1_pd(coef.b[m]);
        const __m256d nr = _mm256_mul_pd(
            _mm256_sub_pd(_mm256_sub_pd(_mm256_mul_pd(x, gr), _mm256_mul_pd(y, gi)),
                          _mm256_mul_pd(a, pr)),
            s);
        const __m256d ni = _mm256_mul_pd(
            _mm256_sub_pd(_mm256_add_pd(_mm256_mul_pd(x, gi), _mm256_mul_pd(y, gr)),
                          _mm256_mul_pd(a, pi)),
            s);
        pr = gr;
        pi = gi;
        gr = nr;
        gi = ni;
      }
      const __m256d mag2 = _mm256_add_pd(_mm256_mul_pd(gr, gr), _mm256_mul_pd(gi, gi));
      const __m256d t = _mm256_mul_pd(mag2, tscale);
      for (std::size_t j = 0; j < n_sets; ++j) {
        sums[j] = _mm256_add_pd(sums[j], _mm256_mul_pd(_mm256_set1_pd(b.weights[j * K + m]), t));
      }
      const __m256d out_hi = _mm256_cmp_pd(mag2, big, _CMP_GT_OQ);
      const __m256d out_lo =
          _mm256_and_pd(_mm256_cmp_pd(mag2, small, _CMP_LT_OQ), _mm256_cmp_pd(mag2, zero, _CMP_GT_OQ));
      const int mask = _mm256_movemask_pd(_mm256_or_pd(out_hi, out_lo));
      if (mask != 0) {
        // Rare: spill, fix the offending lanes with the shared scalar routine, reload.
        alignas(32) double agr[kLanes], agi[kLanes], apr[kLanes], api[kLanes], am[kLanes],
            ats[kLanes];
        alignas(32) double asum[kMaxSets * kLanes];
        _mm256_store_pd(agr, gr);
        _mm256_store_pd(agi, gi);
        _mm256_store_pd(apr, pr);
        _mm256_store_pd(api, pi);
        _mm256_store_pd(am, mag2);
        _mm256_store_pd(ats, tscale);
        for (std::size_t j = 0; j < n_sets; ++j) _mm256_store_pd(asum + j * kLanes, sums[j]);
        for (std::size_t l = 0; l < kLanes; ++l) {
          if ((mask >> l) & 1) {
            detail::rescale_lane(am[l], agr[l], agi[l], apr[l], api[l], d[l], es[l], ats[l],
                                 asum + l, kLanes, n_sets);
          }
        }
        gr = _mm256_load_pd(agr);
        gi = _mm256_load_pd(agi);
        pr = _mm256_load_pd(apr);
        pi = _mm256_load_pd(api);
        tscale = _mm256_load_pd(ats);
        for (std::size_t j = 0; j < n_sets; ++j) sums[j] = _mm256_load_pd(asum + j * kLanes);
      }
    }
    for (std::size_t j = 0; j < n_sets; ++j) {
      alignas(32) double s[kLanes];
      _mm256_store_pd(s, sums[j]);
      for (std::size_t l = 0; l < kLanes; ++l) {
        b.out_log[j * n_points + p0 + l] = detail::finish(s[l], es[l]);
      }
    }
  }

  if (n_vec < n_points) {
    // Tail through the reference kernel on a sub-batch.
    const std::size_t rest = n_points - n_vec;
    std::vector<double> tail(n_sets * rest);
    PairSumBatch sub{b.xs.subspan(n_vec), b.ys.subspan(n_vec), b.tau, b.weights, K, tail};
    pair_sums_scalar(sub);
    for (std::size_t j = 0; j < n_sets; ++j) {
      for (std::size_t p = 0; p < rest; ++p) b.out_log[j * n_points + n_vec + p] = tail[j * rest + p];
    }
  }
}

void column_norms2_avx2(const double* a, std::size_t rows, std::size_t cols, std::size_t ld,
                        double* out) {
  const std::size_t len = 2 * rows;
  const std::size_t n_vec = len - len % 4;
  for (std::size_t c = 0; c < cols; ++c) {
    const double* col = a + 2 * c * ld;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t r = 0; r < n_vec; r += 4) {
      const __m256d v = _mm256_loadu_pd(col + r);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (std::size_t r = n_vec; r < len; ++r) s += col[r] * col[r];
    out[c] = s;
  }
}

std::size_t box_hits_avx2(const double* re, const double* im, std::size_t n, double cx,
                          double cy, double hx, double hy, unsigned char* hit) {
  const __m256d vcx = _mm256_set1_pd(cx), vcy = _mm256_set1_pd(cy);
  const __m256d vhx = _mm256_set1_pd(hx), vhy = _mm256_set1_pd(hy);
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  std::size_t count = 0;
  const std::size_t n_vec = n - n % 4;
  for (std::size_t i = 0; i < n_vec; i += 4) {
    const __m256d dx = _mm256_and_pd(_mm256_sub_pd(_mm256_loadu_pd(re + i), vcx), abs_mask);
    const __m256d dy = _mm256_and_pd(_mm256_sub_pd(_mm256_loadu_pd(im + i), vcy), abs_mask);
    const __m256d in = _mm256_and_pd(_mm256_cmp_pd(dx, vhx, _CMP_LE_OQ),
                                     _mm256_cmp_pd(dy, vhy, _CMP_LE_OQ));
    const int mask = _mm256_movemask_pd(in);
    for (int l = 0; l < 4; ++l) hit[i + l] = static_cast<unsigned char>((mask >> l) & 1);
    count += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mask)));
  }
  return count + box_hits_scalar(re + n_vec, im + n_vec, n - n_vec, cx, cy, hx, hy, hit + n_vec);
}

}  // namespace egin::kernels

#else

namespace egin::kernels {

void pair_sums_avx2(const PairSumBatch& b) { pair_sums_scalar(b); }
void column_norms2_avx2(const double* a, std::size_t rows, std::size_t cols, std::size_t ld,
                        double* out) {
  column_norms2_scalar(a, rows, cols, ld, out);
}
std::size_t box_hits_avx2(const double* re, const double* im, std::size_t n, double cx,
                          double cy, double hx, double hy, unsigned char* hit) {
  return box_hits_scalar(re, im, n, cx, cy, hx, hy, hit);
}

}  // namespace egin::kernels

#endif
