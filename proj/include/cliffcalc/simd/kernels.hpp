#pragma once

#include <cstddef>
#include <string_view>

namespace cliffcalc::simd {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa) noexcept;

// Raw inner loops over dense blade-indexed coefficient arrays of length 2^n.
struct KernelTable {
  Isa isa;
  // c[a ^ b] += sign(a, b) * x[a] * y[b] over all blade pairs. Zero entries of x are skipped.
  void (*geometric_product_acc)(const double* x, const double* y, double* c, unsigned n);
  // Same sum, iterating over the nonzero entries of y instead.
  void (*geometric_product_acc_by_right)(const double* x, const double* y, double* c, unsigned n);
  // sum_i x[i]^2
  double (*sum_squares)(const double* x, std::size_t len);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t len);
};

bool isa_available(Isa isa) noexcept;

// Kernel table for a specific ISA; throws std::invalid_argument when the CPU lacks it.
const KernelTable& kernels_for(Isa isa);

// Best available table, chosen once on first use. CLIFFCALC_ISA=scalar|avx2|neon overrides.
const KernelTable& kernels();

namespace detail {
// Bit j set iff an odd number of bits of `a` sit at positions >= j. The sign of
// e_a e_b is then (-1)^popcount(b & suffix_parity_mask(a)).
inline unsigned suffix_parity_mask(unsigned a) noexcept {
  unsigned mask = 0;
  unsigned parity = 0;
  for (int j = 31; j >= 0; --j) {
    parity ^= (a >> j) & 1U;
    mask |= parity << j;
  }
  return mask;
}

// Bit j set iff an odd number of bits of `b` sit at positions <= j. Equivalently the sign of
// e_a e_b is (-1)^popcount(a & prefix_parity_mask(b)).
inline unsigned prefix_parity_mask(unsigned b) noexcept {
  unsigned mask = 0;
  unsigned parity = 0;
  for (unsigned j = 0; j < 32; ++j) {
    parity ^= (b >> j) & 1U;
    mask |= parity << j;
  }
  return mask;
}

extern const KernelTable scalar_table;
// Defined only when the matching kernel file is built.
extern const KernelTable avx2_table;
extern const KernelTable neon_table;
}  // namespace detail

// Picks the orientation that iterates over the sparser operand.
void geometric_product_acc(const double* x, const double* y, double* c, unsigned n);

}  // namespace cliffcalc::simd
