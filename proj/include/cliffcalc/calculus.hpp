#pragma once

#include <complex>
#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

#include "cliffcalc/operator.hpp"

namespace cliffcalc {

// Counterclockwise circle c + r e^{I theta} on the slice C_I, sampled at N equispaced nodes.
struct Contour {
  double c0 = 0.0;
  double c1 = 0.0;
  double radius = 1.0;
  unsigned nodes = 256;
  SliceUnit unit;

  // "c0,c1,r,N" with N optional.
  static Contour parse(const std::string& text, SliceUnit unit);
  static Contour from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;

  std::complex<double> center() const { return {c0, c1}; }
  SlicePoint node(unsigned k) const;
  // Slice-complex factor realizing ds_I = ds (-I) at node k: (2 pi / N) r e^{I theta_k}.
  std::complex<double> weight(unsigned k) const;
  // Signed distance of z to the circle; negative inside.
  double signed_distance(std::complex<double> z) const { return std::abs(z - center()) - radius; }
  Contour with_radius(double r) const;
};

// Slice function with real coefficients: monomial z^m, polynomial, or ratio of polynomials.
class IntrinsicSliceFunction {
public:
  enum class Kind { monomial, polynomial, rational };

  static IntrinsicSliceFunction monomial(unsigned m);
  // coeffs[k] multiplies z^k.
  static IntrinsicSliceFunction polynomial(std::vector<double> coeffs);
  static IntrinsicSliceFunction rational(std::vector<double> numerator, std::vector<double> denominator);
  static IntrinsicSliceFunction from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;

  Kind kind() const noexcept { return kind_; }
  std::complex<double> operator()(std::complex<double> z) const;
  CliffordNumber at(const SlicePoint& s) const;

private:
  Kind kind_ = Kind::monomial;
  unsigned m_ = 0;
  std::vector<double> num_;
  std::vector<double> den_;
};

enum class Side { left, right };

// (1/2pi) sum_k F(s_k) w_k f(s_k), and the mirror sum f(s_k) w_k F(s_k).
CliffordOperator contour_integrate_left(const std::vector<CliffordOperator>& values, const Contour& contour,
                                        const IntrinsicSliceFunction& f);
CliffordOperator contour_integrate_right(const std::vector<CliffordOperator>& values, const Contour& contour,
                                         const IntrinsicSliceFunction& f);

// Throws SpectrumNotEnclosed unless every sphere point lies inside, at least 1e-6 from the contour.
void require_spectrum_enclosed(const CommutingTuple& t, const Contour& contour);

// (1/2pi) closed integral of S_L^{-1}(s, T) ds_I f(s).
CliffordOperator s_functional_calculus(const IntrinsicSliceFunction& f, const CommutingTuple& t,
                                       const Contour& contour);
// (1/2pi) closed integral of F_n^L(s, T) ds_I f(s), or f(s) ds_I F_n^R(s, T).
CliffordOperator f_functional_calculus(unsigned n, const IntrinsicSliceFunction& f, const CommutingTuple& t,
                                       const Contour& contour, Side side);
// sum_l K_l(m, h) T^{m-2h-l+1} Tbar^{l-1}, the operator that the F-calculus assigns to x^m.
CliffordOperator laplacian_power_operator(unsigned n, unsigned m, const CommutingTuple& t);

struct ProjectorResult {
  CliffordOperator projector;
  double idempotency_gap;
  double left_right_gap;
};

// (1/(2 pi gamma_n)) closed integral of F_n^L(p, T) dp_I p^{n-1} (or the right mirror). T must be a
// vector operator; throws SpectrumOnContour when a sphere point is within 0.05 spectral radius of the
// contour or the contour separates the two slice points of one sphere.
ProjectorResult riesz_projector(unsigned n, const CommutingTuple& t, const Contour& contour, Side side);
// V diag(chi) V^{-1}, chi = 1 on joint eigenvalues whose sphere points the contour encloses.
CliffordOperator spectral_projector_oracle(const CommutingTuple& t, const Contour& contour);

// Vector operator whose joint eigenvalues have moduli in [0.8 inner, 1.2 inner] for the first
// ceil(d/2) basis vectors and in [0.9 outer, 1.1 outer] for the rest, along seeded random directions.
CommutingTuple two_cluster_tuple(unsigned n, std::size_t d, std::uint64_t seed, double inner = 1.0,
                                 double outer = 3.0);

struct MomentNorms {
  double right;
  double left;
};

// Norms of (1/2pi) closed integral of s^m ds_I F_n^R(s, T) and of F_n^L(s, T) ds_I s^m.
MomentNorms moment_vanishing_check(unsigned n, const CommutingTuple& t, const Contour& contour, unsigned m);

// |(1/2pi) closed integral of f(s) ds_I (sbar B - B p)(p^2 - 2 s0 p + |s|^2)^{-1} - B f(p)|.
// Throws PointOutsideContour unless p is inside with margin 0.05 radius.
double res2_identity_check(const IntrinsicSliceFunction& f, const CliffordOperator& b, const Contour& contour,
                           const SlicePoint& p);

// |(1/2pi) closed integral of g(s) ds_I f(s)|.
double cauchy_vanishing_check(const IntrinsicSliceFunction& g, const IntrinsicSliceFunction& f,
                              const Contour& contour);

}  // namespace cliffcalc
