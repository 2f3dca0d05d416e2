#include "cliffcalc/clifford.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cliffcalc/error.hpp"
#include "cliffcalc/simd/kernels.hpp"

namespace cliffcalc {

namespace {

void check_dimension(unsigned n) {
  if (n > max_algebra_dimension) {
    throw Error(ErrorCode::out_of_range,
                "algebra dimension " + std::to_string(n) + " exceeds " +
                    std::to_string(max_algebra_dimension));
  }
}

void check_same(const CliffordNumber& a, const CliffordNumber& b) {
  if (a.n() != b.n()) {
    throw Error(ErrorCode::dimension_mismatch,
                "R_" + std::to_string(a.n()) + " vs R_" + std::to_string(b.n()));
  }
}

}  // namespace

BladeProduct blade_product(BladeIndex a, BladeIndex b) noexcept {
  const unsigned mask = simd::detail::suffix_parity_mask(a.mask);
  const int sign = __builtin_parity(b.mask & mask) ? -1 : 1;
  return {BladeIndex{a.mask ^ b.mask}, sign};
}

CliffordNumber::CliffordNumber(unsigned n) : n_(n) {
  check_dimension(n);
  coeffs_.assign(std::size_t{1} << n, 0.0);
}

CliffordNumber::CliffordNumber(unsigned n, std::vector<double> coeffs)
    : n_(n), coeffs_(std::move(coeffs)) {
  check_dimension(n);
  if (coeffs_.size() != (std::size_t{1} << n)) {
    throw Error(ErrorCode::dimension_mismatch, "coefficient vector must have length 2^n");
  }
}

CliffordNumber CliffordNumber::scalar(unsigned n, double value) {
  CliffordNumber c(n);
  c.coeffs_[0] = value;
  return c;
}

CliffordNumber CliffordNumber::blade(unsigned n, BladeIndex b, double value) {
  CliffordNumber c(n);
  if (b.mask >= c.size()) throw Error(ErrorCode::out_of_range, "blade outside R_n");
  c.coeffs_[b.mask] = value;
  return c;
}

double CliffordNumber::norm() const {
  return std::sqrt(simd::kernels().sum_squares(coeffs_.data(), coeffs_.size()));
}

bool CliffordNumber::is_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double x) { return std::isfinite(x); });
}

CliffordNumber& CliffordNumber::operator+=(const CliffordNumber& other) {
  check_same(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

CliffordNumber& CliffordNumber::operator-=(const CliffordNumber& other) {
  check_same(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

CliffordNumber& CliffordNumber::operator*=(double k) {
  for (double& c : coeffs_) c *= k;
  return *this;
}

CliffordNumber operator*(const CliffordNumber& a, const CliffordNumber& b) {
  check_same(a, b);
  CliffordNumber c(a.n());
  simd::geometric_product_acc(a.data(), b.data(), c.data(), a.n());
  return c;
}

CliffordNumber cn_mul(const CliffordNumber& a, const CliffordNumber& b) { return a * b; }

CliffordNumber cn_add(const CliffordNumber& a, const CliffordNumber& b) { return a + b; }

double Paravector::vector_norm() const {
  double acc = 0.0;
  for (double x : vec) acc += x * x;
  return std::sqrt(acc);
}

CliffordNumber Paravector::to_clifford() const {
  CliffordNumber c(n());
  c[BladeIndex{0}] = x0;
  for (unsigned k = 1; k <= n(); ++k) c[unit_blade(k)] = vec[k - 1];
  return c;
}

Paravector pv_conjugate(const Paravector& x) {
  Paravector out{x.x0, x.vec};
  for (double& c : out.vec) c = -c;
  return out;
}

double pv_modulus(const Paravector& x) { return std::hypot(x.x0, x.vector_norm()); }

SliceUnit::SliceUnit(std::vector<double> components) : components_(std::move(components)) {
  const double norm = Paravector{0.0, components_}.vector_norm();
  if (std::abs(norm - 1.0) > 1e-12) {
    throw Error(ErrorCode::bad_spec, "slice unit must have modulus 1");
  }
}

SliceUnit SliceUnit::normalized(std::vector<double> components) {
  const double norm = Paravector{0.0, components}.vector_norm();
  if (norm == 0.0 || !std::isfinite(norm)) {
    throw Error(ErrorCode::bad_spec, "cannot normalize a zero vector into a slice unit");
  }
  for (double& c : components) c /= norm;
  return SliceUnit(std::move(components));
}

SliceUnit SliceUnit::basis(unsigned n, unsigned k) {
  if (k < 1 || k > n) throw Error(ErrorCode::out_of_range, "basis index must lie in 1..n");
  std::vector<double> c(n, 0.0);
  c[k - 1] = 1.0;
  return SliceUnit(std::move(c));
}

CliffordNumber slice_embed(std::complex<double> z, const SliceUnit& unit) {
  CliffordNumber c(unit.n());
  c[BladeIndex{0}] = z.real();
  const auto& comps = unit.components();
  for (unsigned k = 1; k <= unit.n(); ++k) c[unit_blade(k)] = z.imag() * comps[k - 1];
  return c;
}

CliffordNumber slice_embed(const SlicePoint& p) { return slice_embed(p.to_complex(), p.unit); }

SlicePoint slice_extract(const CliffordNumber& c, const SliceUnit& unit) {
  if (c.n() != unit.n()) throw Error(ErrorCode::dimension_mismatch, "slice unit and number differ in n");
  const auto& comps = unit.components();
  double v = 0.0;
  for (unsigned k = 1; k <= unit.n(); ++k) v += c[unit_blade(k)] * comps[k - 1];
  const SlicePoint point{c.scalar_part(), v, unit};
  const double off = (c - slice_embed(point)).norm();
  if (off > 1e-12 * std::max(1.0, c.norm())) {
    throw Error(ErrorCode::not_in_slice, "component outside span{1, I} of size " + std::to_string(off));
  }
  return point;
}

}  // namespace cliffcalc
