#include <atomic>

#include "egin/kernels.hpp"

namespace egin::kernels {

namespace {

Isa probe() {
#if defined(EGIN_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return Isa::Avx2;
#endif
  return Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{probe()};
  return isa;
}

}  // namespace

Isa detected_isa() {
  static const Isa isa = probe();
  return isa;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2) isa = Isa::Scalar;
  current().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void pair_sums(const PairSumBatch& batch) {
  if (active_isa() == Isa::Avx2) {
    pair_sums_avx2(batch);
  } else {
    pair_sums_scalar(batch);
  }
}

void column_norms2(const double* a, std::size_t rows, std::size_t cols, std::size_t ld,
                   double* out) {
  if (active_isa() == Isa::Avx2) {
    column_norms2_avx2(a, rows, cols, ld, out);
  } else {
    column_norms2_scalar(a, rows, cols, ld, out);
  }
}

std::size_t box_hits(const double* re, const double* im, std::size_t n, double cx, double cy,
                     double hx, double hy, unsigned char* hit) {
  if (active_isa() == Isa::Avx2) return box_hits_avx2(re, im, n, cx, cy, hx, hy, hit);
  return box_hits_scalar(re, im, n, cx, cy, hx, hy, hit);
}

}  // namespace egin::kernels
