#include "cliffcalc/combinatorics.hpp"

#include <string>

#include "cliffcalc/error.hpp"

namespace cliffcalc {

ExactInteger factorial(unsigned k) {
  ExactInteger out = 1;
  for (unsigned j = 2; j <= k; ++j) out *= j;
  return out;
}

ExactInteger gamma_exact(unsigned n) {
  if (n % 2 == 0) throw Error(ErrorCode::even_dimension, "gamma_n needs odd n, got " + std::to_string(n));
  if (n < 3) throw Error(ErrorCode::out_of_range, "gamma_n needs n >= 3");
  const unsigned h = (n - 1) / 2;
  const ExactInteger hf = factorial(h);
  ExactInteger out = (ExactInteger(1) << (n - 1)) * hf * hf;
  return h % 2 ? ExactInteger(-out) : out;
}

ExactInteger k_coeff_exact(unsigned m, unsigned h, unsigned l) {
  if (h < 1 || m < 2 * h || l < 1 || l > m - 2 * h + 1) {
    throw Error(ErrorCode::out_of_range, "K_l(m,h) needs h >= 1, m >= 2h, 1 <= l <= m-2h+1");
  }
  const ExactInteger num = factorial(m - l - h + 1) * factorial(l + h - 2);
  const ExactInteger den = factorial(l - 1) * factorial(m - l - 2 * h + 1);
  const ExactInteger ratio = num / den;
  if (ratio * den != num) throw Error(ErrorCode::out_of_range, "non-integral K coefficient");
  ExactInteger out = (ExactInteger(1) << (2 * h)) * h * ratio;
  return h % 2 ? ExactInteger(-out) : out;
}

ExactInteger laplacian_top_constant(unsigned h) {
  if (h < 1) throw Error(ErrorCode::out_of_range, "h must be positive");
  ExactInteger out = (ExactInteger(1) << (2 * h)) * h * factorial(h) * factorial(h - 1);
  return h % 2 ? ExactInteger(-out) : out;
}

std::pair<ExactRational, ExactRational> appendix_identity_sides(unsigned m, unsigned h) {
  if (h < 1 || m < 2 * h) throw Error(ErrorCode::out_of_range, "appendix identity needs h >= 1, m >= 2h");
  ExactRational lhs = 0;
  for (unsigned l = 1; l <= m - 2 * h + 1; ++l) {
    lhs += ExactRational(factorial(m - l - h + 1) * factorial(l + h - 2),
                         factorial(l - 1) * factorial(m - l - 2 * h + 1));
  }
  const ExactRational rhs(factorial(h - 1) * factorial(h) * factorial(m),
                          factorial(2 * h) * factorial(m - 2 * h));
  return {lhs, rhs};
}

bool appendix_identity_check(unsigned m, unsigned h) {
  const auto [lhs, rhs] = appendix_identity_sides(m, h);
  return lhs == rhs;
}

ExactRational pochhammer(const ExactRational& a, unsigned k) {
  ExactRational out = 1;
  for (unsigned j = 0; j < k; ++j) out *= a + j;
  return out;
}

bool gamma_series_coherence(unsigned n) {
  const unsigned h = (n - 1) / 2;
  return gamma_exact(n) == laplacian_top_constant(h) && gamma_exact(n) == k_coeff_exact(2 * h, h, 1);
}

}  // namespace cliffcalc
