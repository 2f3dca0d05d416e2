#include "cliffcalc/resolvents.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "cliffcalc/error.hpp"

namespace cliffcalc {

namespace {

using cplx = std::complex<double>;

void check_tuple(unsigned n, const SlicePoint& s, const CommutingTuple& t) {
  if (t.n() != n || s.unit.n() != n) {
    throw Error(ErrorCode::dimension_mismatch, "n=" + std::to_string(n) + " does not match the tuple or slice");
  }
}

void check_point(unsigned n, const SlicePoint& s, const Paravector& x) {
  if (x.n() != n || s.unit.n() != n) throw Error(ErrorCode::dimension_mismatch, "paravector or slice has wrong n");
}

CliffordOperator s_minus_tbar(const SlicePoint& s, const CommutingTuple& t) {
  return CliffordOperator::from_number(slice_embed(s), t.d()) - op_conjugate(t);
}

cplx kernel_base(const SlicePoint& s, const Paravector& x) {
  if (std::abs(s.u - x.x0) < 1e-12 && std::abs(std::abs(s.v) - x.vector_norm()) < 1e-12) {
    throw Error(ErrorCode::same_sphere, "x lies on the sphere [s]");
  }
  const cplx z = s.to_complex();
  const double mod2 = x.x0 * x.x0 + x.vector_norm() * x.vector_norm();
  return z * z - 2.0 * x.x0 * z + mod2;
}

CliffordNumber s_minus_xbar(const SlicePoint& s, const Paravector& x) {
  return slice_embed(s) - pv_conjugate(x).to_clifford();
}

// x as z = x0 + J |x_vec| on its own slice; J defaults to e_1 on the real axis.
SliceUnit own_unit(const Paravector& x) {
  const double r = x.vector_norm();
  if (r == 0.0) return SliceUnit::basis(x.n(), 1);
  return SliceUnit::normalized(x.vec);
}

double k_coeff(unsigned m, unsigned h, unsigned l) { return k_coeff_exact(m, h, l).convert_to<double>(); }

void check_series_premise(double ratio_num, double ratio_den) {
  if (!(ratio_num < ratio_den)) {
    throw Error(ErrorCode::divergent_region,
                "series needs |x| < |s| (got " + std::to_string(ratio_num) + " >= " + std::to_string(ratio_den) + ")");
  }
}

// Sum over m of c_m (on the slice of x) times s^{-1-m} (on the slice of s), in either order.
CliffordNumber kernel_series(unsigned n, const SlicePoint& s, const Paravector& x, unsigned max_m, bool left) {
  check_point(n, s, x);
  const unsigned h = sce_exponent(n);
  check_series_premise(pv_modulus(x), std::sqrt(s.modulus_squared()));
  const cplx z(x.x0, x.vector_norm());
  const cplx w = s.to_complex();
  const cplx w_inv = 1.0 / w;

  std::vector<cplx> z_pow{1.0};
  std::vector<cplx> zb_pow{1.0};
  for (unsigned k = 1; k + 2 * h <= max_m + 1; ++k) {
    z_pow.push_back(z_pow.back() * z);
    zb_pow.push_back(zb_pow.back() * std::conj(z));
  }
  // Collect sum_m x-part * s-part as a + b J + c I + e J I (left) or a + b J + c I + e I J (right).
  double a = 0.0, b = 0.0, c = 0.0, e = 0.0;
  cplx s_pow = std::pow(w_inv, static_cast<int>(2 * h + 1));
  for (unsigned m = 2 * h; m <= max_m; ++m) {
    cplx coeff = 0.0;
    for (unsigned l = 1; l <= m - 2 * h + 1; ++l) {
      coeff += k_coeff(m, h, l) * z_pow[m - 2 * h - l + 1] * zb_pow[l - 1];
    }
    a += coeff.real() * s_pow.real();
    b += coeff.imag() * s_pow.real();
    c += coeff.real() * s_pow.imag();
    e += coeff.imag() * s_pow.imag();
    s_pow *= w_inv;
  }
  const CliffordNumber j = own_unit(x).to_clifford();
  const CliffordNumber i = s.unit.to_clifford();
  CliffordNumber out = CliffordNumber::scalar(n, a) + b * j + c * i;
  out += e * (left ? j * i : i * j);
  return out;
}

CliffordOperator resolvent_series(unsigned n, const SlicePoint& s, const CommutingTuple& t, unsigned max_m,
                                  bool left) {
  check_tuple(n, s, t);
  const unsigned h = sce_exponent(n);
  check_series_premise(t.spectral_radius(), std::sqrt(s.modulus_squared()));
  CliffordOperator out(n, t.d());
  if (max_m < 2 * h) return out;
  const unsigned top = max_m - 2 * h;
  const cplx w_inv = 1.0 / s.to_complex();

  std::vector<CliffordOperator> t_pow{CliffordOperator::identity(n, t.d())};
  for (unsigned k = 1; k <= top; ++k) t_pow.push_back(t_pow.back() * t.as_operator());
  const CliffordOperator tbar = op_conjugate(t);
  CliffordOperator tbar_pow = CliffordOperator::identity(n, t.d());

  // T and Tbar commute, so T^a Tbar^b = Tbar^b T^a; group by b = l - 1.
  for (unsigned b = 0; b <= top; ++b) {
    CliffordOperator inner(n, t.d());
    for (unsigned a = 0; a + b <= top; ++a) {
      const unsigned m = a + b + 2 * h;
      const cplx weight = k_coeff(m, h, b + 1) * std::pow(w_inv, static_cast<int>(m + 1));
      const CliffordNumber sw = slice_embed(weight, s.unit);
      inner += left ? t_pow[a] * sw : sw * t_pow[a];
    }
    out += left ? tbar_pow * inner : inner * tbar_pow;
    if (b < top) tbar_pow = tbar_pow * tbar;
  }
  return out;
}

}  // namespace

GammaConstant gamma(unsigned n) { return GammaConstant{n, gamma_exact(n)}; }

unsigned sce_exponent(unsigned n) {
  if (n % 2 == 0) throw Error(ErrorCode::even_dimension, "n must be odd, got " + std::to_string(n));
  if (n < 3) throw Error(ErrorCode::out_of_range, "n must be at least 3");
  return (n - 1) / 2;
}

SliceComplexOperator pseudo_resolvent_slice(const SlicePoint& s, const CommutingTuple& t) {
  return slice_complex_invert(pseudo_resolvent_base(s, t));
}

CliffordOperator pseudo_resolvent(const SlicePoint& s, const CommutingTuple& t) {
  return pseudo_resolvent_slice(s, t).to_operator();
}

CliffordOperator s_resolvent_left(const SlicePoint& s, const CommutingTuple& t) {
  check_tuple(t.n(), s, t);
  return s_minus_tbar(s, t) * pseudo_resolvent(s, t);
}

CliffordOperator s_resolvent_right(const SlicePoint& s, const CommutingTuple& t) {
  check_tuple(t.n(), s, t);
  return pseudo_resolvent(s, t) * s_minus_tbar(s, t);
}

CliffordOperator f_resolvent_left(unsigned n, const SlicePoint& s, const CommutingTuple& t) {
  check_tuple(n, s, t);
  const unsigned h = sce_exponent(n);
  const CliffordOperator q = slice_complex_pow(pseudo_resolvent_slice(s, t), h + 1).to_operator();
  return gamma(n).as_double() * (s_minus_tbar(s, t) * q);
}

CliffordOperator f_resolvent_right(unsigned n, const SlicePoint& s, const CommutingTuple& t) {
  check_tuple(n, s, t);
  const unsigned h = sce_exponent(n);
  const CliffordOperator q = slice_complex_pow(pseudo_resolvent_slice(s, t), h + 1).to_operator();
  return gamma(n).as_double() * (q * s_minus_tbar(s, t));
}

CliffordNumber s_kernel_left(const SlicePoint& s, const Paravector& x) {
  check_point(s.unit.n(), s, x);
  return s_minus_xbar(s, x) * slice_embed(1.0 / kernel_base(s, x), s.unit);
}

CliffordNumber f_kernel_left(unsigned n, const SlicePoint& s, const Paravector& x) {
  check_point(n, s, x);
  const unsigned h = sce_exponent(n);
  const cplx q = std::pow(kernel_base(s, x), -static_cast<int>(h + 1));
  return gamma(n).as_double() * (s_minus_xbar(s, x) * slice_embed(q, s.unit));
}

CliffordNumber f_kernel_right(unsigned n, const SlicePoint& s, const Paravector& x) {
  check_point(n, s, x);
  const unsigned h = sce_exponent(n);
  const cplx q = std::pow(kernel_base(s, x), -static_cast<int>(h + 1));
  return gamma(n).as_double() * (slice_embed(q, s.unit) * s_minus_xbar(s, x));
}

CliffordNumber laplacian_power_monomial(unsigned n, unsigned m, const Paravector& x) {
  if (x.n() != n) throw Error(ErrorCode::dimension_mismatch, "paravector has wrong n");
  const unsigned h = sce_exponent(n);
  if (m < 2 * h) return CliffordNumber(n);
  if (m == 2 * h) return CliffordNumber::scalar(n, laplacian_top_constant(h).convert_to<double>());
  const cplx z(x.x0, x.vector_norm());
  cplx sum = 0.0;
  for (unsigned l = 1; l <= m - 2 * h + 1; ++l) {
    sum += k_coeff(m, h, l) * std::pow(z, static_cast<int>(m - 2 * h - l + 1)) *
           std::pow(std::conj(z), static_cast<int>(l - 1));
  }
  return slice_embed(sum, own_unit(x));
}

CliffordNumber f_kernel_series_left(unsigned n, const SlicePoint& s, const Paravector& x, unsigned max_m) {
  return kernel_series(n, s, x, max_m, true);
}

CliffordNumber f_kernel_series_right(unsigned n, const SlicePoint& s, const Paravector& x, unsigned max_m) {
  return kernel_series(n, s, x, max_m, false);
}

CliffordOperator f_resolvent_series_left(unsigned n, const SlicePoint& s, const CommutingTuple& t, unsigned max_m) {
  return resolvent_series(n, s, t, max_m, true);
}

CliffordOperator f_resolvent_series_right(unsigned n, const SlicePoint& s, const CommutingTuple& t,
                                          unsigned max_m) {
  return resolvent_series(n, s, t, max_m, false);
}

SeriesStudy series_convergence(unsigned n, const SlicePoint& s, const Paravector& x, unsigned max_m) {
  const CliffordNumber exact = f_kernel_left(n, s, x);
  const double scale = exact.norm();
  SeriesStudy study{{}, {}, 0.0, pv_modulus(x) / std::sqrt(s.modulus_squared())};
  for (unsigned m = 2 * sce_exponent(n); m <= max_m; ++m) {
    study.truncations.push_back(m);
    study.errors.push_back((f_kernel_series_left(n, s, x, m) - exact).norm() / scale);
  }

  std::vector<std::size_t> fit;
  for (std::size_t k = 0; k < study.errors.size(); ++k)
    if (study.truncations[k] >= 2 * sce_exponent(n) + 4 && study.errors[k] > 1e-13) fit.push_back(k);
  if (fit.size() < 4) return study;
  Eigen::MatrixXd a(fit.size(), 3);
  Eigen::VectorXd b(fit.size());
  for (std::size_t r = 0; r < fit.size(); ++r) {
    const double m = study.truncations[fit[r]];
    a.row(static_cast<Eigen::Index>(r)) << 1.0, std::log(m), m;
    b(static_cast<Eigen::Index>(r)) = std::log(study.errors[fit[r]]);
  }
  const Eigen::Vector3d coef = a.colPivHouseholderQr().solve(b);
  study.fitted_ratio = std::exp(coef(2));
  return study;
}

LrResidual lr_f_resolvent_residual(unsigned n, const SlicePoint& s, const CommutingTuple& t) {
  check_tuple(n, s, t);
  const unsigned h = sce_exponent(n);
  const SliceComplexOperator q = pseudo_resolvent_slice(s, t);
  const CliffordOperator q_h = slice_complex_pow(q, h).to_operator();
  const CliffordOperator q_h1 = slice_complex_pow(q, h + 1).to_operator();
  const double g = gamma(n).as_double();
  const CliffordOperator smt = s_minus_tbar(s, t);
  const CliffordNumber sv = slice_embed(s);
  const CliffordOperator& top = t.as_operator();

  const CliffordOperator fl = g * (smt * q_h1);
  const CliffordOperator fr = g * (q_h1 * smt);
  const CliffordOperator target = g * q_h;

  auto relative = [&](const CliffordOperator& a, const CliffordOperator& b) {
    const CliffordOperator diff = a - b - target;
    const double scale = std::max({1.0, a.norm(), b.norm(), target.norm()});
    return diff.norm() / scale;
  };
  return {relative(fl * sv, top * fl), relative(sv * fr, fr * top)};
}

}  // namespace cliffcalc
