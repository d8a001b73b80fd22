#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops. Each kernel has a portable scalar reference and an
// AVX2 variant; the variant is picked once at runtime from CPUID and can be
// forced for testing. Variants are equivalence-tested against the reference.

namespace egin::kernels {

enum class Isa { Scalar, Avx2 };

/// Best ISA supported by both this build and the running CPU.
Isa detected_isa();
/// ISA currently used by the dispatching entry points.
Isa active_isa();
/// Override the dispatch choice; requesting an unsupported ISA falls back to Scalar.
void force_isa(Isa isa);
std::string_view isa_name(Isa isa);

/// Weighted Hermite pair sums over a batch of points.
///
/// For each point z_p = xs[p] + i ys[p] and each weight set j (row j of the
/// row-major `weights`, `n_terms` columns), computes
///   log( sum_m weights[j][m] * t_m(z_p) ),  t_m = |g_m|^2,
///   g_{m+1} = (z g_m - sqrt(m) tau g_{m-1}) / sqrt(m+1),  g_0 = 1,
/// so t_m = tau^m / m! |He_m(z/sqrt(tau))|^2. Results go to
/// out_log[j * n_points + p]; -inf when the sum is zero. Weights must be >= 0.
struct PairSumBatch {
  std::span<const double> xs;
  std::span<const double> ys;
  double tau = 0.0;
  std::span<const double> weights;
  std::size_t n_terms = 0;
  std::span<double> out_log;
};

void pair_sums(const PairSumBatch& batch);
void pair_sums_scalar(const PairSumBatch& batch);
void pair_sums_avx2(const PairSumBatch& batch);

/// Squared Euclidean norms of the columns of a column-major complex matrix
/// stored as interleaved (re, im) doubles: out[c] = sum_r |a(r, c)|^2.
void column_norms2(const double* interleaved, std::size_t rows, std::size_t cols,
                   std::size_t ld, double* out);
void column_norms2_scalar(const double* interleaved, std::size_t rows, std::size_t cols,
                          std::size_t ld, double* out);
void column_norms2_avx2(const double* interleaved, std::size_t rows, std::size_t cols,
                        std::size_t ld, double* out);

/// Box-window hit mask: hit[i] = |re[i] - cx| <= hx && |im[i] - cy| <= hy.
/// Returns the number of hits.
std::size_t box_hits(const double* re, const double* im, std::size_t n, double cx, double cy,
                     double hx, double hy, unsigned char* hit);
std::size_t box_hits_scalar(const double* re, const double* im, std::size_t n, double cx,
                            double cy, double hx, double hy, unsigned char* hit);
std::size_t box_hits_avx2(const double* re, const double* im, std::size_t n, double cx,
                          double cy, double hx, double hy, unsigned char* hit);

}  // namespace egin::kernels
