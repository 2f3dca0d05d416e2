#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace cliffcalc {

inline constexpr unsigned max_algebra_dimension = 13;

// Subset of {1..n} as a bit mask; bit k-1 stands for e_k. Mask 0 is the scalar blade.
struct BladeIndex {
  std::uint32_t mask = 0;

  constexpr unsigned grade() const noexcept { return static_cast<unsigned>(__builtin_popcount(mask)); }
  friend constexpr bool operator==(BladeIndex, BladeIndex) = default;
};

// The blade e_k for k in 1..n.
constexpr BladeIndex unit_blade(unsigned k) noexcept { return BladeIndex{1U << (k - 1)}; }

struct BladeProduct {
  BladeIndex blade;
  int sign;
};

// e_a e_b = sign * e_{a xor b}, with e_k^2 = -1.
BladeProduct blade_product(BladeIndex a, BladeIndex b) noexcept;

// Element of R_n stored densely: coeffs[mask] multiplies e_mask.
class CliffordNumber {
public:
  CliffordNumber() = default;
  explicit CliffordNumber(unsigned n);
  CliffordNumber(unsigned n, std::vector<double> coeffs);

  static CliffordNumber scalar(unsigned n, double value);
  static CliffordNumber blade(unsigned n, BladeIndex b, double value = 1.0);

  unsigned n() const noexcept { return n_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  double* data() noexcept { return coeffs_.data(); }
  const double* data() const noexcept { return coeffs_.data(); }

  double operator[](BladeIndex b) const { return coeffs_[b.mask]; }
  double& operator[](BladeIndex b) { return coeffs_[b.mask]; }

  double scalar_part() const { return coeffs_[0]; }
  // Euclidean norm of the coefficient vector.
  double norm() const;
  bool is_finite() const;

  CliffordNumber& operator+=(const CliffordNumber& other);
  CliffordNumber& operator-=(const CliffordNumber& other);
  CliffordNumber& operator*=(double k);

  friend CliffordNumber operator+(CliffordNumber a, const CliffordNumber& b) { return a += b; }
  friend CliffordNumber operator-(CliffordNumber a, const CliffordNumber& b) { return a -= b; }
  friend CliffordNumber operator-(CliffordNumber a) { return a *= -1.0; }
  friend CliffordNumber operator*(CliffordNumber a, double k) { return a *= k; }
  friend CliffordNumber operator*(double k, CliffordNumber a) { return a *= k; }
  friend CliffordNumber operator*(const CliffordNumber& a, const CliffordNumber& b);

private:
  unsigned n_ = 0;
  std::vector<double> coeffs_;
};

CliffordNumber cn_mul(const CliffordNumber& a, const CliffordNumber& b);
CliffordNumber cn_add(const CliffordNumber& a, const CliffordNumber& b);

// x0 + x1 e1 + ... + xn en.
struct Paravector {
  double x0 = 0.0;
  std::vector<double> vec;

  unsigned n() const noexcept { return static_cast<unsigned>(vec.size()); }
  double vector_norm() const;
  CliffordNumber to_clifford() const;
};

Paravector pv_conjugate(const Paravector& x);
double pv_modulus(const Paravector& x);

// Unit purely imaginary paravector; squares to -1.
class SliceUnit {
public:
  SliceUnit() = default;
  // Throws BadSpec unless |components| = 1 within 1e-12.
  explicit SliceUnit(std::vector<double> components);

  static SliceUnit normalized(std::vector<double> components);
  static SliceUnit basis(unsigned n, unsigned k);

  unsigned n() const noexcept { return static_cast<unsigned>(components_.size()); }
  const std::vector<double>& components() const noexcept { return components_; }
  Paravector as_paravector() const { return Paravector{0.0, components_}; }
  CliffordNumber to_clifford() const { return as_paravector().to_clifford(); }

private:
  std::vector<double> components_;
};

// u + I v on the slice C_I.
struct SlicePoint {
  double u = 0.0;
  double v = 0.0;
  SliceUnit unit;

  std::complex<double> to_complex() const { return {u, v}; }
  SlicePoint conjugate() const { return {u, -v, unit}; }
  double modulus_squared() const { return u * u + v * v; }
  SlicePoint with_unit(SliceUnit other) const { return {u, v, std::move(other)}; }
};

CliffordNumber slice_embed(const SlicePoint& p);
// Embeds z = a + i b as a + I b.
CliffordNumber slice_embed(std::complex<double> z, const SliceUnit& unit);
// Throws NotInSlice when c has weight outside span{1, I} above 1e-12 (relative to |c| when |c| > 1).
SlicePoint slice_extract(const CliffordNumber& c, const SliceUnit& unit);

}  // namespace cliffcalc
