#include "cliffcalc/simd/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace cliffcalc::simd {

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(CLIFFCALC_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(CLIFFCALC_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument("ISA not available on this CPU: " + std::string(to_string(isa)));
  }
  switch (isa) {
#if defined(CLIFFCALC_HAVE_AVX2)
    case Isa::avx2: return detail::avx2_table;
#endif
#if defined(CLIFFCALC_HAVE_NEON)
    case Isa::neon: return detail::neon_table;
#endif
    default: return detail::scalar_table;
  }
}

namespace {

const KernelTable& select_kernels() {
  if (const char* forced = std::getenv("CLIFFCALC_ISA")) {
    const std::string name(forced);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (name == to_string(isa) && isa_available(isa)) return kernels_for(isa);
    }
  }
  for (Isa isa : {Isa::avx2, Isa::neon}) {
    if (isa_available(isa)) return kernels_for(isa);
  }
  return detail::scalar_table;
}

}  // namespace

const KernelTable& kernels() {
  static const KernelTable& table = select_kernels();
  return table;
}

}  // namespace cliffcalc::simd

namespace cliffcalc::simd {

void geometric_product_acc(const double* x, const double* y, double* c, unsigned n) {
  const unsigned size = 1U << n;
  unsigned nnz_x = 0;
  unsigned nnz_y = 0;
  for (unsigned i = 0; i < size; ++i) {
    nnz_x += x[i] != 0.0;
    nnz_y += y[i] != 0.0;
  }
  if (nnz_x == 0 || nnz_y == 0) return;
  const KernelTable& table = kernels();
  if (nnz_y < nnz_x) {
    table.geometric_product_acc_by_right(x, y, c, n);
  } else {
    table.geometric_product_acc(x, y, c, n);
  }
}

}  // namespace cliffcalc::simd
