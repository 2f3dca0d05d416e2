#pragma once

#include <vector>

#include "cliffcalc/clifford.hpp"
#include "cliffcalc/combinatorics.hpp"
#include "cliffcalc/operator.hpp"

namespace cliffcalc {

struct GammaConstant {
  unsigned n;
  ExactInteger value;

  unsigned h() const noexcept { return (n - 1) / 2; }
  double as_double() const { return value.convert_to<double>(); }
};

// Throws EvenDimension for even n.
GammaConstant gamma(unsigned n);
// h = (n-1)/2 for odd n >= 3.
unsigned sce_exponent(unsigned n);

// (s^2 - s(T + Tbar) + T Tbar)^{-1}; throws SpectralPoint near the F-spectrum.
SliceComplexOperator pseudo_resolvent_slice(const SlicePoint& s, const CommutingTuple& t);
CliffordOperator pseudo_resolvent(const SlicePoint& s, const CommutingTuple& t);

// (s - Tbar) Q_s(T) and Q_s(T) (s - Tbar).
CliffordOperator s_resolvent_left(const SlicePoint& s, const CommutingTuple& t);
CliffordOperator s_resolvent_right(const SlicePoint& s, const CommutingTuple& t);

// gamma_n (s - Tbar) Q_s(T)^{(n+1)/2} and gamma_n Q_s(T)^{(n+1)/2} (s - Tbar).
CliffordOperator f_resolvent_left(unsigned n, const SlicePoint& s, const CommutingTuple& t);
CliffordOperator f_resolvent_right(unsigned n, const SlicePoint& s, const CommutingTuple& t);

// (s - xbar)(s^2 - 2 x0 s + |x|^2)^{-1}.
CliffordNumber s_kernel_left(const SlicePoint& s, const Paravector& x);
// gamma_n (s - xbar)(s^2 - 2 x0 s + |x|^2)^{-(n+1)/2} and its mirror. Throws SameSphere for x in [s].
CliffordNumber f_kernel_left(unsigned n, const SlicePoint& s, const Paravector& x);
CliffordNumber f_kernel_right(unsigned n, const SlicePoint& s, const Paravector& x);

// Delta^h x^m in R_n with h = (n-1)/2.
CliffordNumber laplacian_power_monomial(unsigned n, unsigned m, const Paravector& x);

// Partial sums over m = 2h..max_m of Delta^h x^m s^{-1-m} (left) or s^{-1-m} Delta^h x^m (right).
// Throws DivergentRegion unless |x| < |s|; for operators the spectral radius of T plays |x|.
CliffordNumber f_kernel_series_left(unsigned n, const SlicePoint& s, const Paravector& x, unsigned max_m);
CliffordNumber f_kernel_series_right(unsigned n, const SlicePoint& s, const Paravector& x, unsigned max_m);
CliffordOperator f_resolvent_series_left(unsigned n, const SlicePoint& s, const CommutingTuple& t, unsigned max_m);
CliffordOperator f_resolvent_series_right(unsigned n, const SlicePoint& s, const CommutingTuple& t, unsigned max_m);

struct SeriesStudy {
  std::vector<unsigned> truncations;
  // Relative error of the left partial sum against f_kernel_left at each truncation.
  std::vector<double> errors;
  // Fitted rate of log err = a + b log M + M log rate over the errors above the roundoff floor.
  double fitted_ratio;
  double predicted_ratio;
};

SeriesStudy series_convergence(unsigned n, const SlicePoint& s, const Paravector& x, unsigned max_m);

struct LrResidual {
  double left;
  double right;
};

// Relative residuals of F^L s - T F^L = gamma Q^h and s F^R - F^R T = gamma Q^h.
LrResidual lr_f_resolvent_residual(unsigned n, const SlicePoint& s, const CommutingTuple& t);

}  // namespace cliffcalc
