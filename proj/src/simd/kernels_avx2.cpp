#include "cliffcalc/simd/kernels.hpp"

#include <immintrin.h>

namespace cliffcalc::simd::detail {
namespace {

// Lane u of the result takes lane u ^ Low of v.
template <unsigned Low>
inline __m256d xor_permute(__m256d v) {
  if constexpr (Low == 0) {
    return v;
  } else if constexpr (Low == 1) {
    return _mm256_permute_pd(v, 0b0101);
  } else if constexpr (Low == 2) {
    return _mm256_permute4x64_pd(v, _MM_SHUFFLE(1, 0, 3, 2));
  } else {
    return _mm256_permute4x64_pd(v, _MM_SHUFFLE(0, 1, 2, 3));
  }
}

// c[r ^ t] += (-1)^popcount(t & mask) * alpha * other[t]. Blocks of four consecutive t land on
// blocks of four consecutive r ^ t, permuted by the low two bits of r.
template <unsigned Low>
void accumulate_row(double alpha, unsigned r, unsigned mask, const double* other, double* c,
                    unsigned size) {
  alignas(32) double lane_coeff[4];
  for (unsigned u = 0; u < 4; ++u) {
    lane_coeff[u] = __builtin_parity((u ^ Low) & mask & 3U) ? -alpha : alpha;
  }
  const __m256d pos = _mm256_load_pd(lane_coeff);
  const __m256d neg = _mm256_sub_pd(_mm256_setzero_pd(), pos);
  const unsigned high_mask = mask & ~3U;
  for (unsigned block = 0; block < size; block += 4) {
    const __m256d v = xor_permute<Low>(_mm256_loadu_pd(other + block));
    double* dst = c + ((r ^ block) & ~3U);
    const __m256d coeff = __builtin_parity(block & high_mask) ? neg : pos;
    _mm256_storeu_pd(dst, _mm256_fmadd_pd(coeff, v, _mm256_loadu_pd(dst)));
  }
}

inline void dispatch_row(double alpha, unsigned r, unsigned mask, const double* other, double* c,
                         unsigned size) {
  switch (r & 3U) {
    case 0: accumulate_row<0>(alpha, r, mask, other, c, size); break;
    case 1: accumulate_row<1>(alpha, r, mask, other, c, size); break;
    case 2: accumulate_row<2>(alpha, r, mask, other, c, size); break;
    default: accumulate_row<3>(alpha, r, mask, other, c, size); break;
  }
}

void geometric_product_acc_avx2(const double* x, const double* y, double* c, unsigned n) {
  if (n < 2) {
    scalar_table.geometric_product_acc(x, y, c, n);
    return;
  }
  const unsigned size = 1U << n;
  for (unsigned a = 0; a < size; ++a) {
    if (x[a] == 0.0) continue;
    dispatch_row(x[a], a, suffix_parity_mask(a), y, c, size);
  }
}

void geometric_product_acc_by_right_avx2(const double* x, const double* y, double* c, unsigned n) {
  if (n < 2) {
    scalar_table.geometric_product_acc_by_right(x, y, c, n);
    return;
  }
  const unsigned size = 1U << n;
  for (unsigned b = 0; b < size; ++b) {
    if (y[b] == 0.0) continue;
    dispatch_row(y[b], b, prefix_parity_mask(b), x, c, size);
  }
}

double sum_squares_avx2(const double* x, std::size_t len) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    const __m256d v0 = _mm256_loadu_pd(x + i);
    const __m256d v1 = _mm256_loadu_pd(x + i + 4);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double acc = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < len; ++i) acc += x[i] * x[i];
  return acc;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t len) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < len; ++i) y[i] += alpha * x[i];
}

}  // namespace

const KernelTable avx2_table{Isa::avx2, &geometric_product_acc_avx2,
                             &geometric_product_acc_by_right_avx2, &sum_squares_avx2, &axpy_avx2};

}  // namespace cliffcalc::simd::detail
