#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <utility>

namespace cliffcalc {

using ExactInteger = boost::multiprecision::cpp_int;
using ExactRational = boost::multiprecision::cpp_rational;

ExactInteger factorial(unsigned k);

// (-1)^h 2^(n-1) (h!)^2 with h = (n-1)/2. Throws EvenDimension for even n, OutOfRange for n < 3.
ExactInteger gamma_exact(unsigned n);

// 4^h (-1)^h h (m-l-h+1)! (l+h-2)! / ((l-1)! (m-l-2h+1)!), for m >= 2h, 1 <= l <= m-2h+1, h >= 1.
ExactInteger k_coeff_exact(unsigned m, unsigned h, unsigned l);

// h 4^h (-1)^h h! (h-1)!, the value of Delta^h x^(2h).
ExactInteger laplacian_top_constant(unsigned h);

// Both sides of sum_{l=1}^{m-2h+1} (m-l-h+1)!(l+h-2)!/((l-1)!(m-l-2h+1)!) = (h-1)! h! m!/((2h)!(m-2h)!).
std::pair<ExactRational, ExactRational> appendix_identity_sides(unsigned m, unsigned h);
bool appendix_identity_check(unsigned m, unsigned h);

// (a)_k = a (a+1) ... (a+k-1).
ExactRational pochhammer(const ExactRational& a, unsigned k);

// gamma_n equals the m = 2h series coefficient.
bool gamma_series_coherence(unsigned n);

}  // namespace cliffcalc
