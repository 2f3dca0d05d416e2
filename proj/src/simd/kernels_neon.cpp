#include "cliffcalc/simd/kernels.hpp"

#include <arm_neon.h>

namespace cliffcalc::simd::detail {
namespace {

// Pairs of consecutive t land on pairs of consecutive r ^ t, swapped when r is odd.
void accumulate_row(double alpha, unsigned r, unsigned mask, const double* other, double* c,
                    unsigned size) {
  const unsigned low = r & 1U;
  double lane_coeff[2];
  for (unsigned u = 0; u < 2; ++u) lane_coeff[u] = ((u ^ low) & mask & 1U) ? -alpha : alpha;
  const float64x2_t pos = vld1q_f64(lane_coeff);
  const float64x2_t neg = vnegq_f64(pos);
  const unsigned high_mask = mask & ~1U;
  for (unsigned block = 0; block < size; block += 2) {
    float64x2_t v = vld1q_f64(other + block);
    if (low) v = vextq_f64(v, v, 1);
    double* dst = c + ((r ^ block) & ~1U);
    const float64x2_t coeff = __builtin_parity(block & high_mask) ? neg : pos;
    vst1q_f64(dst, vfmaq_f64(vld1q_f64(dst), coeff, v));
  }
}

void geometric_product_acc_neon(const double* x, const double* y, double* c, unsigned n) {
  if (n < 1) {
    scalar_table.geometric_product_acc(x, y, c, n);
    return;
  }
  const unsigned size = 1U << n;
  for (unsigned a = 0; a < size; ++a) {
    if (x[a] == 0.0) continue;
    accumulate_row(x[a], a, suffix_parity_mask(a), y, c, size);
  }
}

void geometric_product_acc_by_right_neon(const double* x, const double* y, double* c, unsigned n) {
  if (n < 1) {
    scalar_table.geometric_product_acc_by_right(x, y, c, n);
    return;
  }
  const unsigned size = 1U << n;
  for (unsigned b = 0; b < size; ++b) {
    if (y[b] == 0.0) continue;
    accumulate_row(y[b], b, prefix_parity_mask(b), x, c, size);
  }
}

double sum_squares_neon(const double* x, std::size_t len) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    const float64x2_t v = vld1q_f64(x + i);
    acc = vfmaq_f64(acc, v, v);
  }
  double total = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < len; ++i) total += x[i] * x[i];
  return total;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t len) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < len; ++i) y[i] += alpha * x[i];
}

}  // namespace

const KernelTable neon_table{Isa::neon, &geometric_product_acc_neon,
                             &geometric_product_acc_by_right_neon, &sum_squares_neon, &axpy_neon};

}  // namespace cliffcalc::simd::detail
