#include "cliffcalc/simd/kernels.hpp"

namespace cliffcalc::simd::detail {
namespace {

// c[r ^ t] += (-1)^popcount(t & mask) * alpha * other[t] for all t.
inline void accumulate_row(double alpha, unsigned r, unsigned mask, const double* other, double* c,
                           unsigned size) {
  for (unsigned t = 0; t < size; ++t) {
    const double term = alpha * other[t];
    if (__builtin_parity(t & mask)) {
      c[r ^ t] -= term;
    } else {
      c[r ^ t] += term;
    }
  }
}

void geometric_product_acc_scalar(const double* x, const double* y, double* c, unsigned n) {
  const unsigned size = 1U << n;
  for (unsigned a = 0; a < size; ++a) {
    if (x[a] == 0.0) continue;
    accumulate_row(x[a], a, suffix_parity_mask(a), y, c, size);
  }
}

void geometric_product_acc_by_right_scalar(const double* x, const double* y, double* c, unsigned n) {
  const unsigned size = 1U << n;
  for (unsigned b = 0; b < size; ++b) {
    if (y[b] == 0.0) continue;
    accumulate_row(y[b], b, prefix_parity_mask(b), x, c, size);
  }
}

double sum_squares_scalar(const double* x, std::size_t len) {
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) acc += x[i] * x[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) y[i] += alpha * x[i];
}

}  // namespace

const KernelTable scalar_table{Isa::scalar, &geometric_product_acc_scalar,
                               &geometric_product_acc_by_right_scalar, &sum_squares_scalar,
                               &axpy_scalar};

}  // namespace cliffcalc::simd::detail
