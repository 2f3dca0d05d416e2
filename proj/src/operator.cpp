#include "cliffcalc/operator.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <random>
#include <regex>
#include <string>

#include "cliffcalc/error.hpp"
#include "cliffcalc/simd/kernels.hpp"

namespace cliffcalc {

namespace {

void check_shape(const CliffordOperator& a, const CliffordOperator& b) {
  if (a.n() != b.n() || a.d() != b.d()) {
    throw Error(ErrorCode::dimension_mismatch,
                "operator shapes (n=" + std::to_string(a.n()) + ", d=" + std::to_string(a.d()) +
                    ") and (n=" + std::to_string(b.n()) + ", d=" + std::to_string(b.d()) + ")");
  }
}

void check_number(const CliffordOperator& a, const CliffordNumber& c) {
  if (a.n() != c.n()) throw Error(ErrorCode::dimension_mismatch, "scalar and operator differ in n");
}

}  // namespace

CliffordOperator::CliffordOperator(unsigned n, std::size_t d) : n_(n), d_(d) {
  if (n > max_algebra_dimension) throw Error(ErrorCode::out_of_range, "algebra dimension too large");
  data_.assign(d * d * blade_count(), 0.0);
}

CliffordOperator CliffordOperator::identity(unsigned n, std::size_t d) {
  CliffordOperator out(n, d);
  for (std::size_t i = 0; i < d; ++i) out.entry(i, i)[0] = 1.0;
  return out;
}

CliffordOperator CliffordOperator::from_number(const CliffordNumber& c, std::size_t d) {
  CliffordOperator out(c.n(), d);
  for (std::size_t i = 0; i < d; ++i) std::copy(c.data(), c.data() + c.size(), out.entry(i, i));
  return out;
}

CliffordOperator CliffordOperator::from_blade_matrix(unsigned n, BladeIndex blade, const Eigen::MatrixXd& m) {
  CliffordOperator out(n, static_cast<std::size_t>(m.rows()));
  out.add_blade_matrix(blade, m);
  return out;
}

Eigen::MatrixXd CliffordOperator::blade_matrix(BladeIndex blade) const {
  Eigen::MatrixXd m(d_, d_);
  for (std::size_t i = 0; i < d_; ++i) {
    for (std::size_t j = 0; j < d_; ++j) m(i, j) = entry(i, j)[blade.mask];
  }
  return m;
}

void CliffordOperator::add_blade_matrix(BladeIndex blade, const Eigen::MatrixXd& m, double scale) {
  if (static_cast<std::size_t>(m.rows()) != d_ || static_cast<std::size_t>(m.cols()) != d_) {
    throw Error(ErrorCode::dimension_mismatch, "blade matrix has the wrong size");
  }
  if (blade.mask >= blade_count()) throw Error(ErrorCode::out_of_range, "blade outside R_n");
  for (std::size_t i = 0; i < d_; ++i) {
    for (std::size_t j = 0; j < d_; ++j) entry(i, j)[blade.mask] += scale * m(i, j);
  }
}

double CliffordOperator::norm() const {
  return std::sqrt(simd::kernels().sum_squares(data_.data(), data_.size()));
}

bool CliffordOperator::is_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

CliffordOperator& CliffordOperator::operator+=(const CliffordOperator& other) {
  return add_scaled(1.0, other);
}

CliffordOperator& CliffordOperator::operator-=(const CliffordOperator& other) {
  return add_scaled(-1.0, other);
}

CliffordOperator& CliffordOperator::operator*=(double k) {
  for (double& x : data_) x *= k;
  return *this;
}

CliffordOperator& CliffordOperator::add_scaled(double k, const CliffordOperator& other) {
  check_shape(*this, other);
  simd::kernels().axpy(k, other.data_.data(), data_.data(), data_.size());
  return *this;
}

CliffordOperator operator*(const CliffordOperator& a, const CliffordOperator& b) {
  check_shape(a, b);
  const std::size_t d = a.d();
  CliffordOperator c(a.n(), d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t j = 0; j < d; ++j) {
        simd::geometric_product_acc(a.entry(i, k), b.entry(k, j), c.entry(i, j), a.n());
      }
    }
  }
  return c;
}

CliffordOperator operator*(const CliffordNumber& c, const CliffordOperator& a) {
  check_number(a, c);
  CliffordOperator out(a.n(), a.d());
  for (std::size_t i = 0; i < a.d(); ++i) {
    for (std::size_t j = 0; j < a.d(); ++j) {
      simd::geometric_product_acc(c.data(), a.entry(i, j), out.entry(i, j), a.n());
    }
  }
  return out;
}

CliffordOperator operator*(const CliffordOperator& a, const CliffordNumber& c) {
  check_number(a, c);
  CliffordOperator out(a.n(), a.d());
  for (std::size_t i = 0; i < a.d(); ++i) {
    for (std::size_t j = 0; j < a.d(); ++j) {
      simd::geometric_product_acc(a.entry(i, j), c.data(), out.entry(i, j), a.n());
    }
  }
  return out;
}

CliffordOperator cm_mul(const CliffordOperator& a, const CliffordOperator& b) { return a * b; }
CliffordOperator cm_add(const CliffordOperator& a, const CliffordOperator& b) { return a + b; }
CliffordOperator cm_scale_left(const CliffordNumber& c, const CliffordOperator& a) { return c * a; }
CliffordOperator cm_scale_right(const CliffordOperator& a, const CliffordNumber& c) { return a * c; }
double cm_norm(const CliffordOperator& a) { return a.norm(); }

CliffordOperator cm_pow(const CliffordOperator& a, unsigned k) {
  CliffordOperator result = CliffordOperator::identity(a.n(), a.d());
  CliffordOperator base = a;
  bool first = true;
  while (k > 0) {
    if (k & 1U) {
      result = first ? base : result * base;
      first = false;
    }
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

SliceComplexOperator SliceComplexOperator::from_complex(const Eigen::MatrixXcd& z, SliceUnit unit) {
  return {z.real(), z.imag(), std::move(unit)};
}

Eigen::MatrixXcd SliceComplexOperator::to_complex() const {
  Eigen::MatrixXcd z(re.rows(), re.cols());
  z.real() = re;
  z.imag() = im;
  return z;
}

CliffordOperator SliceComplexOperator::to_operator() const {
  const unsigned n = unit.n();
  CliffordOperator out = CliffordOperator::from_blade_matrix(n, BladeIndex{0}, re);
  const auto& comps = unit.components();
  for (unsigned k = 1; k <= n; ++k) {
    if (comps[k - 1] != 0.0) out.add_blade_matrix(unit_blade(k), im, comps[k - 1]);
  }
  return out;
}

SliceComplexOperator operator*(const SliceComplexOperator& a, const SliceComplexOperator& b) {
  if (a.unit.components() != b.unit.components()) {
    throw Error(ErrorCode::not_in_slice, "slice-complex operators live on different slices");
  }
  return SliceComplexOperator::from_complex(a.to_complex() * b.to_complex(), a.unit);
}

double condition_number(const Eigen::MatrixXcd& z) {
  if (z.size() == 0) return 1.0;
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(z);
  const auto& sv = svd.singularValues();
  const double smallest = sv(sv.size() - 1);
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smallest;
}

SliceComplexOperator slice_complex_invert(const SliceComplexOperator& q) {
  const Eigen::MatrixXcd z = q.to_complex();
  const double cond = condition_number(z);
  if (!(cond < spectral_condition_threshold)) {
    throw Error(ErrorCode::spectral_point, "condition number " + std::to_string(cond) + " at or above 1e12");
  }
  return SliceComplexOperator::from_complex(z.partialPivLu().inverse(), q.unit);
}

SliceComplexOperator slice_complex_pow(const SliceComplexOperator& q, unsigned k) {
  const Eigen::MatrixXcd z = q.to_complex();
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(z.rows(), z.cols());
  Eigen::MatrixXcd base = z;
  while (k > 0) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return SliceComplexOperator::from_complex(result, q.unit);
}

SpectrumSpec SpectrumSpec::uniform(double lo, double hi, bool vector_operator) {
  if (!(lo <= hi)) throw Error(ErrorCode::bad_spec, "random-uniform bounds must satisfy a <= b");
  SpectrumSpec spec;
  spec.lo = lo;
  spec.hi = hi;
  spec.vector_operator = vector_operator;
  return spec;
}

SpectrumSpec SpectrumSpec::explicit_values(std::vector<std::vector<double>> values, bool vector_operator) {
  SpectrumSpec spec;
  spec.kind = Kind::explicit_values;
  spec.eigenvalues = std::move(values);
  spec.vector_operator = vector_operator;
  return spec;
}

SpectrumSpec SpectrumSpec::parse(const std::string& text) {
  static const std::regex uniform_re(
      R"(^\s*random-uniform\[\s*([-+0-9.eE]+)\s*,\s*([-+0-9.eE]+)\s*\]\s*$)");
  std::smatch match;
  if (std::regex_match(text, match, uniform_re)) {
    try {
      return uniform(std::stod(match[1].str()), std::stod(match[2].str()));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::bad_spec, "unparsable bounds in '" + text + "'");
    }
  }
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::bad_spec, "spectrum spec must be random-uniform[a,b] or a JSON list of vectors");
  }
  if (!parsed.is_array()) throw Error(ErrorCode::bad_spec, "explicit spectrum must be a list");
  std::vector<std::vector<double>> values;
  for (const auto& row : parsed) {
    if (!row.is_array()) throw Error(ErrorCode::bad_spec, "each joint eigenvalue must be a list");
    values.push_back(row.get<std::vector<double>>());
  }
  return explicit_values(std::move(values));
}

CommutingTuple::CommutingTuple(unsigned n, std::uint64_t seed, Eigen::MatrixXd basis,
                               std::vector<Eigen::VectorXd> diagonals)
    : n_(n), seed_(seed), basis_(std::move(basis)), diagonals_(std::move(diagonals)) {
  const std::size_t d = static_cast<std::size_t>(basis_.rows());
  if (d == 0 || basis_.cols() != basis_.rows()) throw Error(ErrorCode::bad_spec, "basis must be square, d >= 1");
  if (diagonals_.size() != n + 1) throw Error(ErrorCode::bad_spec, "need n+1 diagonals");
  for (const auto& diag : diagonals_) {
    if (static_cast<std::size_t>(diag.size()) != d) throw Error(ErrorCode::bad_spec, "diagonal length must equal d");
  }
  basis_inv_ = basis_.partialPivLu().inverse();
  op_ = CliffordOperator(n, d);
  modulus_squared_ = Eigen::MatrixXd::Zero(d, d);
  for (unsigned l = 0; l <= n; ++l) {
    components_.push_back(basis_ * diagonals_[l].asDiagonal() * basis_inv_);
    op_.add_blade_matrix(l == 0 ? BladeIndex{0} : unit_blade(l), components_.back());
    const Eigen::VectorXd sq = diagonals_[l].cwiseProduct(diagonals_[l]);
    modulus_squared_ += basis_ * sq.asDiagonal() * basis_inv_;
  }
}

std::vector<double> CommutingTuple::joint_eigenvalue(std::size_t k) const {
  std::vector<double> out;
  for (const auto& diag : diagonals_) out.push_back(diag(static_cast<Eigen::Index>(k)));
  return out;
}

bool CommutingTuple::is_vector_operator() const { return diagonals_[0].cwiseAbs().maxCoeff() == 0.0; }

double CommutingTuple::commutator_noise() const {
  double worst = 0.0;
  for (unsigned l = 0; l <= n_; ++l) {
    for (unsigned m = l + 1; m <= n_; ++m) {
      const double scale = components_[l].norm() * components_[m].norm();
      if (scale == 0.0) continue;
      const double c = (components_[l] * components_[m] - components_[m] * components_[l]).norm();
      worst = std::max(worst, c / scale);
    }
  }
  return worst;
}

double CommutingTuple::spectral_radius() const {
  double radius = 0.0;
  for (std::size_t k = 0; k < d(); ++k) {
    double acc = 0.0;
    for (double x : joint_eigenvalue(k)) acc += x * x;
    radius = std::max(radius, std::sqrt(acc));
  }
  return radius;
}

CommutingTuple CommutingTuple::scaled(double c) const {
  std::vector<Eigen::VectorXd> diags = diagonals_;
  for (auto& diag : diags) diag *= c;
  return CommutingTuple(n_, seed_, basis_, std::move(diags));
}

CommutingTuple make_commuting_tuple(unsigned n, std::size_t d, std::uint64_t seed, const SpectrumSpec& spec) {
  if (d < 1) throw Error(ErrorCode::bad_spec, "d must be at least 1");
  if (n < 1 || n > max_algebra_dimension) throw Error(ErrorCode::out_of_range, "n outside 1..13");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Eigen::MatrixXd basis(d, d);
  bool accepted = false;
  for (int attempt = 0; attempt < 100000 && !accepted; ++attempt) {
    for (Eigen::Index i = 0; i < basis.rows(); ++i) {
      for (Eigen::Index j = 0; j < basis.cols(); ++j) basis(i, j) = normal(rng);
    }
    accepted = condition_number(basis.cast<std::complex<double>>()) <= 100.0;
  }
  if (!accepted) throw Error(ErrorCode::bad_spec, "could not draw a basis with condition number <= 100");

  std::vector<Eigen::VectorXd> diags(n + 1, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d)));
  if (spec.kind == SpectrumSpec::Kind::random_uniform) {
    std::uniform_real_distribution<double> uniform(spec.lo, spec.hi);
    for (std::size_t k = 0; k < d; ++k) {
      for (unsigned l = 0; l <= n; ++l) diags[l](static_cast<Eigen::Index>(k)) = uniform(rng);
    }
  } else {
    if (spec.eigenvalues.size() != d) {
      throw Error(ErrorCode::bad_spec, "explicit spectrum lists " + std::to_string(spec.eigenvalues.size()) +
                                           " joint eigenvalues, expected d = " + std::to_string(d));
    }
    for (std::size_t k = 0; k < d; ++k) {
      if (spec.eigenvalues[k].size() != n + 1) {
        throw Error(ErrorCode::bad_spec, "each joint eigenvalue needs n+1 entries");
      }
      for (unsigned l = 0; l <= n; ++l) diags[l](static_cast<Eigen::Index>(k)) = spec.eigenvalues[k][l];
    }
  }
  if (spec.vector_operator) diags[0].setZero();
  return CommutingTuple(n, seed, std::move(basis), std::move(diags));
}

CliffordOperator op_conjugate(const CommutingTuple& t) {
  CliffordOperator out = CliffordOperator::from_blade_matrix(t.n(), BladeIndex{0}, t.component(0));
  for (unsigned l = 1; l <= t.n(); ++l) out.add_blade_matrix(unit_blade(l), t.component(l), -1.0);
  return out;
}

std::string tuple_to_json(const CommutingTuple& t) {
  nlohmann::json doc;
  doc["n"] = t.n();
  doc["d"] = t.d();
  doc["seed"] = t.seed();
  nlohmann::json basis = nlohmann::json::array();
  for (Eigen::Index i = 0; i < t.basis().rows(); ++i) {
    std::vector<double> row;
    for (Eigen::Index j = 0; j < t.basis().cols(); ++j) row.push_back(t.basis()(i, j));
    basis.push_back(row);
  }
  doc["V"] = basis;
  nlohmann::json diags = nlohmann::json::array();
  for (const auto& diag : t.diagonals()) diags.push_back(std::vector<double>(diag.data(), diag.data() + diag.size()));
  doc["diagonals"] = diags;
  return doc.dump();
}

CommutingTuple tuple_from_json(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    const unsigned n = doc.at("n").get<unsigned>();
    const std::size_t d = doc.at("d").get<std::size_t>();
    const auto rows = doc.at("V").get<std::vector<std::vector<double>>>();
    if (rows.size() != d) throw Error(ErrorCode::bad_spec, "V must have d rows");
    Eigen::MatrixXd basis(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      if (rows[i].size() != d) throw Error(ErrorCode::bad_spec, "V must be square");
      for (std::size_t j = 0; j < d; ++j) basis(i, j) = rows[i][j];
    }
    std::vector<Eigen::VectorXd> diags;
    for (const auto& diag : doc.at("diagonals").get<std::vector<std::vector<double>>>()) {
      diags.push_back(Eigen::Map<const Eigen::VectorXd>(diag.data(), static_cast<Eigen::Index>(diag.size())));
    }
    return CommutingTuple(n, doc.at("seed").get<std::uint64_t>(), std::move(basis), std::move(diags));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::bad_spec, std::string("malformed tuple JSON: ") + e.what());
  }
}

std::vector<SpectralSphere> joint_spectrum(const CommutingTuple& t) {
  std::vector<SpectralSphere> spheres;
  for (std::size_t k = 0; k < t.d(); ++k) {
    const auto lambda = t.joint_eigenvalue(k);
    double r2 = 0.0;
    for (std::size_t l = 1; l < lambda.size(); ++l) r2 += lambda[l] * lambda[l];
    const SpectralSphere sphere{lambda[0], std::sqrt(r2), 1};
    auto same = std::find_if(spheres.begin(), spheres.end(), [&](const SpectralSphere& other) {
      return std::abs(other.center - sphere.center) <= 1e-9 && std::abs(other.radius - sphere.radius) <= 1e-9;
    });
    if (same != spheres.end()) {
      same->multiplicity += 1;
    } else {
      spheres.push_back(sphere);
    }
  }
  return spheres;
}

SliceComplexOperator pseudo_resolvent_base(const SlicePoint& s, const CommutingTuple& t) {
  if (s.unit.n() != t.n()) throw Error(ErrorCode::dimension_mismatch, "slice point and tuple differ in n");
  const auto d = static_cast<Eigen::Index>(t.d());
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd& t0 = t.component(0);
  SliceComplexOperator base;
  base.re = (s.u * s.u - s.v * s.v) * id - 2.0 * s.u * t0 + t.modulus_squared();
  base.im = 2.0 * s.u * s.v * id - 2.0 * s.v * t0;
  base.unit = s.unit;
  return base;
}

}  // namespace cliffcalc
