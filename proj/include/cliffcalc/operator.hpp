#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "cliffcalc/clifford.hpp"

namespace cliffcalc {

// d x d matrix whose entries are elements of R_n; equivalently sum_A e_A M_A with real M_A.
// Storage is entry-major: the 2^n coefficients of entry (i, j) are contiguous.
class CliffordOperator {
public:
  CliffordOperator() = default;
  CliffordOperator(unsigned n, std::size_t d);

  static CliffordOperator identity(unsigned n, std::size_t d);
  // c * Id.
  static CliffordOperator from_number(const CliffordNumber& c, std::size_t d);
  static CliffordOperator from_blade_matrix(unsigned n, BladeIndex blade, const Eigen::MatrixXd& m);

  unsigned n() const noexcept { return n_; }
  std::size_t d() const noexcept { return d_; }
  std::size_t blade_count() const noexcept { return std::size_t{1} << n_; }

  double* entry(std::size_t i, std::size_t j) { return data_.data() + (i * d_ + j) * blade_count(); }
  const double* entry(std::size_t i, std::size_t j) const {
    return data_.data() + (i * d_ + j) * blade_count();
  }
  const std::vector<double>& data() const noexcept { return data_; }

  Eigen::MatrixXd blade_matrix(BladeIndex blade) const;
  void add_blade_matrix(BladeIndex blade, const Eigen::MatrixXd& m, double scale = 1.0);

  double norm() const;
  bool is_finite() const;

  CliffordOperator& operator+=(const CliffordOperator& other);
  CliffordOperator& operator-=(const CliffordOperator& other);
  CliffordOperator& operator*=(double k);
  // this += k * other
  CliffordOperator& add_scaled(double k, const CliffordOperator& other);

  friend CliffordOperator operator+(CliffordOperator a, const CliffordOperator& b) { return a += b; }
  friend CliffordOperator operator-(CliffordOperator a, const CliffordOperator& b) { return a -= b; }
  friend CliffordOperator operator-(CliffordOperator a) { return a *= -1.0; }
  friend CliffordOperator operator*(CliffordOperator a, double k) { return a *= k; }
  friend CliffordOperator operator*(double k, CliffordOperator a) { return a *= k; }
  friend CliffordOperator operator*(const CliffordOperator& a, const CliffordOperator& b);
  friend CliffordOperator operator*(const CliffordNumber& c, const CliffordOperator& a);
  friend CliffordOperator operator*(const CliffordOperator& a, const CliffordNumber& c);

private:
  unsigned n_ = 0;
  std::size_t d_ = 0;
  std::vector<double> data_;
};

CliffordOperator cm_mul(const CliffordOperator& a, const CliffordOperator& b);
CliffordOperator cm_add(const CliffordOperator& a, const CliffordOperator& b);
CliffordOperator cm_scale_left(const CliffordNumber& c, const CliffordOperator& a);
CliffordOperator cm_scale_right(const CliffordOperator& a, const CliffordNumber& c);
double cm_norm(const CliffordOperator& a);
// a^k by repeated squaring; a^0 is the identity.
CliffordOperator cm_pow(const CliffordOperator& a, unsigned k);

// re + I im with real d x d matrices; isomorphic to the complex matrix re + i im.
struct SliceComplexOperator {
  Eigen::MatrixXd re;
  Eigen::MatrixXd im;
  SliceUnit unit;

  static SliceComplexOperator from_complex(const Eigen::MatrixXcd& z, SliceUnit unit);
  Eigen::MatrixXcd to_complex() const;
  CliffordOperator to_operator() const;
  std::size_t d() const noexcept { return static_cast<std::size_t>(re.rows()); }

  friend SliceComplexOperator operator*(const SliceComplexOperator& a, const SliceComplexOperator& b);
};

inline constexpr double spectral_condition_threshold = 1e12;

// 2-norm condition number via SVD; infinity for singular input.
double condition_number(const Eigen::MatrixXcd& z);

// Throws SpectralPoint when cond(Q) exceeds spectral_condition_threshold.
SliceComplexOperator slice_complex_invert(const SliceComplexOperator& q);
SliceComplexOperator slice_complex_pow(const SliceComplexOperator& q, unsigned k);

// Either "random-uniform[a,b]" or an explicit list of joint eigenvalue vectors (one per basis vector,
// each of length n+1). vector_operator forces T0 = 0.
struct SpectrumSpec {
  enum class Kind { random_uniform, explicit_values };
  Kind kind = Kind::random_uniform;
  double lo = -1.0;
  double hi = 1.0;
  std::vector<std::vector<double>> eigenvalues;
  bool vector_operator = false;

  static SpectrumSpec uniform(double lo, double hi, bool vector_operator = false);
  static SpectrumSpec explicit_values(std::vector<std::vector<double>> values, bool vector_operator = false);
  static SpectrumSpec parse(const std::string& text);
};

// T = T0 + sum_l e_l T_l with T_l = V D_l V^{-1}.
class CommutingTuple {
public:
  CommutingTuple(unsigned n, std::uint64_t seed, Eigen::MatrixXd basis, std::vector<Eigen::VectorXd> diagonals);

  unsigned n() const noexcept { return n_; }
  std::size_t d() const noexcept { return static_cast<std::size_t>(basis_.rows()); }
  std::uint64_t seed() const noexcept { return seed_; }
  const Eigen::MatrixXd& basis() const noexcept { return basis_; }
  const Eigen::MatrixXd& basis_inverse() const noexcept { return basis_inv_; }
  const std::vector<Eigen::VectorXd>& diagonals() const noexcept { return diagonals_; }
  const Eigen::MatrixXd& component(unsigned l) const { return components_.at(l); }

  // Joint eigenvalue vector (lambda_0, ..., lambda_n) of basis vector k.
  std::vector<double> joint_eigenvalue(std::size_t k) const;

  const CliffordOperator& as_operator() const noexcept { return op_; }
  // T0^2 + sum_l T_l^2, which equals T Tbar for commuting components.
  const Eigen::MatrixXd& modulus_squared() const noexcept { return modulus_squared_; }
  bool is_vector_operator() const;
  // max_{l<m} |T_l T_m - T_m T_l|_F / (|T_l|_F |T_m|_F), zero pairs skipped.
  double commutator_noise() const;
  // Largest |lambda| over all joint eigenvalues.
  double spectral_radius() const;

  // Same basis with every diagonal multiplied by c.
  CommutingTuple scaled(double c) const;

private:
  unsigned n_;
  std::uint64_t seed_;
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd basis_inv_;
  std::vector<Eigen::VectorXd> diagonals_;
  std::vector<Eigen::MatrixXd> components_;
  Eigen::MatrixXd modulus_squared_;
  CliffordOperator op_;
};

// Deterministic in seed; the basis is resampled until its condition number is at most 100.
CommutingTuple make_commuting_tuple(unsigned n, std::size_t d, std::uint64_t seed, const SpectrumSpec& spec);

CliffordOperator op_conjugate(const CommutingTuple& t);

std::string tuple_to_json(const CommutingTuple& t);
CommutingTuple tuple_from_json(const std::string& text);

struct SpectralSphere {
  double center = 0.0;
  double radius = 0.0;
  int multiplicity = 1;

  // The two points x0 +- i r in any slice, as complex numbers.
  std::complex<double> upper() const { return {center, radius}; }
  std::complex<double> lower() const { return {center, -radius}; }
};

std::vector<SpectralSphere> joint_spectrum(const CommutingTuple& t);

// The slice-complex form of s^2 - s(T + Tbar) + T Tbar.
SliceComplexOperator pseudo_resolvent_base(const SlicePoint& s, const CommutingTuple& t);

}  // namespace cliffcalc
