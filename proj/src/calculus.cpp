#include "cliffcalc/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "cliffcalc/error.hpp"
#include "cliffcalc/resolvents.hpp"

namespace cliffcalc {

namespace {

using cplx = std::complex<double>;

cplx horner(const std::vector<double>& coeffs, cplx z) {
  cplx acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

// Fixed pairwise reduction order so results do not depend on how node values were produced.
CliffordOperator pairwise_sum(std::vector<CliffordOperator>& items, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return items[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  CliffordOperator left = pairwise_sum(items, lo, mid);
  left += pairwise_sum(items, mid, hi);
  return left;
}

CliffordOperator integrate(const std::vector<CliffordOperator>& values, const Contour& contour,
                           const IntrinsicSliceFunction& f, Side side) {
  if (values.size() != contour.nodes || values.empty()) {
    throw Error(ErrorCode::dimension_mismatch, "need one value per contour node");
  }
  std::vector<CliffordOperator> parts;
  parts.reserve(values.size());
  for (unsigned k = 0; k < contour.nodes; ++k) {
    const cplx factor = contour.weight(k) * f(contour.node(k).to_complex()) / (2.0 * std::numbers::pi);
    const CliffordNumber c = slice_embed(factor, contour.unit);
    parts.push_back(side == Side::left ? values[k] * c : c * values[k]);
  }
  return pairwise_sum(parts, 0, parts.size());
}

std::vector<CliffordOperator> f_resolvent_nodes(unsigned n, const CommutingTuple& t, const Contour& contour,
                                                Side side) {
  std::vector<CliffordOperator> values;
  values.reserve(contour.nodes);
  for (unsigned k = 0; k < contour.nodes; ++k) {
    const SlicePoint s = contour.node(k);
    values.push_back(side == Side::left ? f_resolvent_left(n, s, t) : f_resolvent_right(n, s, t));
  }
  return values;
}

// Sphere points closer to the contour than `margin`, or split by it, are rejected.
void require_separated(const CommutingTuple& t, const Contour& contour, double margin) {
  for (const auto& sphere : joint_spectrum(t)) {
    const double du = contour.signed_distance(sphere.upper());
    const double dl = contour.signed_distance(sphere.lower());
    if (std::abs(du) < margin || std::abs(dl) < margin) {
      throw Error(ErrorCode::spectrum_on_contour, "sphere (center " + std::to_string(sphere.center) + ", radius " +
                                                      std::to_string(sphere.radius) + ") too close to the contour");
    }
    if ((du < 0) != (dl < 0)) {
      throw Error(ErrorCode::spectrum_on_contour, "contour separates the two slice points of one sphere");
    }
  }
}

void check_unit(const CommutingTuple& t, const Contour& contour) {
  if (contour.unit.n() != t.n()) throw Error(ErrorCode::dimension_mismatch, "contour slice does not match n");
}

}  // namespace

Contour Contour::parse(const std::string& text, SliceUnit unit) {
  std::vector<double> fields;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      fields.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::bad_spec, "contour field '" + item + "' is not a number");
    }
  }
  if (fields.size() != 3 && fields.size() != 4) throw Error(ErrorCode::bad_spec, "contour must be c0,c1,r[,N]");
  Contour c;
  c.c0 = fields[0];
  c.c1 = fields[1];
  c.radius = fields[2];
  if (fields.size() == 4) {
    if (fields[3] < 1 || fields[3] != std::floor(fields[3])) throw Error(ErrorCode::bad_spec, "N must be a positive integer");
    c.nodes = static_cast<unsigned>(fields[3]);
  }
  if (!(c.radius > 0)) throw Error(ErrorCode::bad_spec, "contour radius must be positive");
  c.unit = std::move(unit);
  return c;
}

Contour Contour::from_json(const nlohmann::json& j) {
  try {
    Contour c;
    const auto center = j.at("center").get<std::vector<double>>();
    if (center.size() != 2) throw Error(ErrorCode::bad_spec, "center must be [c0, c1]");
    c.c0 = center[0];
    c.c1 = center[1];
    c.radius = j.at("radius").get<double>();
    c.nodes = j.value("N", 256U);
    c.unit = SliceUnit(j.at("unit").get<std::vector<double>>());
    if (!(c.radius > 0) || c.nodes == 0) throw Error(ErrorCode::bad_spec, "radius and N must be positive");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::bad_spec, std::string("malformed contour: ") + e.what());
  }
}

nlohmann::ordered_json Contour::to_json() const {
  return {{"center", {c0, c1}}, {"radius", radius}, {"N", nodes}, {"unit", unit.components()}};
}

SlicePoint Contour::node(unsigned k) const {
  const double theta = 2.0 * std::numbers::pi * k / nodes;
  return {c0 + radius * std::cos(theta), c1 + radius * std::sin(theta), unit};
}

cplx Contour::weight(unsigned k) const {
  const double theta = 2.0 * std::numbers::pi * k / nodes;
  return (2.0 * std::numbers::pi / nodes) * radius * std::polar(1.0, theta);
}

Contour Contour::with_radius(double r) const {
  Contour c = *this;
  c.radius = r;
  return c;
}

IntrinsicSliceFunction IntrinsicSliceFunction::monomial(unsigned m) {
  IntrinsicSliceFunction f;
  f.m_ = m;
  return f;
}

IntrinsicSliceFunction IntrinsicSliceFunction::polynomial(std::vector<double> coeffs) {
  IntrinsicSliceFunction f;
  f.kind_ = Kind::polynomial;
  f.num_ = std::move(coeffs);
  return f;
}

IntrinsicSliceFunction IntrinsicSliceFunction::rational(std::vector<double> numerator, std::vector<double> denominator) {
  if (denominator.empty() || std::all_of(denominator.begin(), denominator.end(), [](double c) { return c == 0.0; })) {
    throw Error(ErrorCode::bad_spec, "rational function needs a nonzero denominator");
  }
  IntrinsicSliceFunction f;
  f.kind_ = Kind::rational;
  f.num_ = std::move(numerator);
  f.den_ = std::move(denominator);
  return f;
}

IntrinsicSliceFunction IntrinsicSliceFunction::from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "monomial") return monomial(j.at("m").get<unsigned>());
    if (kind == "polynomial") return polynomial(j.at("coeffs").get<std::vector<double>>());
    if (kind == "rational") {
      return rational(j.at("numerator").get<std::vector<double>>(), j.at("denominator").get<std::vector<double>>());
    }
    throw Error(ErrorCode::bad_spec, "unknown function kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::bad_spec, std::string("malformed function: ") + e.what());
  }
}

nlohmann::ordered_json IntrinsicSliceFunction::to_json() const {
  switch (kind_) {
    case Kind::monomial: return {{"kind", "monomial"}, {"m", m_}};
    case Kind::polynomial: return {{"kind", "polynomial"}, {"coeffs", num_}};
    case Kind::rational: return {{"kind", "rational"}, {"numerator", num_}, {"denominator", den_}};
  }
  return {};
}

cplx IntrinsicSliceFunction::operator()(cplx z) const {
  switch (kind_) {
    case Kind::monomial: return std::pow(z, static_cast<int>(m_));
    case Kind::polynomial: return horner(num_, z);
    case Kind::rational: return horner(num_, z) / horner(den_, z);
  }
  return 0.0;
}

CliffordNumber IntrinsicSliceFunction::at(const SlicePoint& s) const { return slice_embed((*this)(s.to_complex()), s.unit); }

CliffordOperator contour_integrate_left(const std::vector<CliffordOperator>& values, const Contour& contour,
                                        const IntrinsicSliceFunction& f) {
  return integrate(values, contour, f, Side::left);
}

CliffordOperator contour_integrate_right(const std::vector<CliffordOperator>& values, const Contour& contour,
                                         const IntrinsicSliceFunction& f) {
  return integrate(values, contour, f, Side::right);
}

void require_spectrum_enclosed(const CommutingTuple& t, const Contour& contour) {
  for (const auto& sphere : joint_spectrum(t)) {
    for (const cplx z : {sphere.upper(), sphere.lower()}) {
      if (!(contour.signed_distance(z) < -1e-6)) {
        throw Error(ErrorCode::spectrum_not_enclosed,
                    "sphere point (" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ") not inside");
      }
    }
  }
}

CliffordOperator s_functional_calculus(const IntrinsicSliceFunction& f, const CommutingTuple& t,
                                       const Contour& contour) {
  check_unit(t, contour);
  require_spectrum_enclosed(t, contour);
  std::vector<CliffordOperator> values;
  values.reserve(contour.nodes);
  for (unsigned k = 0; k < contour.nodes; ++k) values.push_back(s_resolvent_left(contour.node(k), t));
  return contour_integrate_left(values, contour, f);
}

CliffordOperator f_functional_calculus(unsigned n, const IntrinsicSliceFunction& f, const CommutingTuple& t,
                                       const Contour& contour, Side side) {
  check_unit(t, contour);
  require_spectrum_enclosed(t, contour);
  const auto values = f_resolvent_nodes(n, t, contour, side);
  return side == Side::left ? contour_integrate_left(values, contour, f) : contour_integrate_right(values, contour, f);
}

CliffordOperator laplacian_power_operator(unsigned n, unsigned m, const CommutingTuple& t) {
  const unsigned h = sce_exponent(n);
  CliffordOperator out(t.n(), t.d());
  if (m < 2 * h) return out;
  const CliffordOperator tbar = op_conjugate(t);
  for (unsigned l = 1; l <= m - 2 * h + 1; ++l) {
    const double k = k_coeff_exact(m, h, l).convert_to<double>();
    out.add_scaled(k, cm_pow(t.as_operator(), m - 2 * h - l + 1) * cm_pow(tbar, l - 1));
  }
  return out;
}

ProjectorResult riesz_projector(unsigned n, const CommutingTuple& t, const Contour& contour, Side side) {
  check_unit(t, contour);
  if (!t.is_vector_operator()) throw Error(ErrorCode::not_vector_operator, "projector needs T0 = 0");
  require_separated(t, contour, 0.05 * t.spectral_radius());
  const double g = gamma(n).as_double();
  const auto f = IntrinsicSliceFunction::monomial(n - 1);
  const CliffordOperator left = (1.0 / g) * contour_integrate_left(f_resolvent_nodes(n, t, contour, Side::left), contour, f);
  const CliffordOperator right =
      (1.0 / g) * contour_integrate_right(f_resolvent_nodes(n, t, contour, Side::right), contour, f);
  const CliffordOperator& chosen = side == Side::left ? left : right;
  return {chosen, (chosen * chosen - chosen).norm(), (left - right).norm()};
}

CliffordOperator spectral_projector_oracle(const CommutingTuple& t, const Contour& contour) {
  Eigen::VectorXd chi(static_cast<Eigen::Index>(t.d()));
  for (std::size_t k = 0; k < t.d(); ++k) {
    const auto lambda = t.joint_eigenvalue(k);
    double r2 = 0.0;
    for (std::size_t l = 1; l < lambda.size(); ++l) r2 += lambda[l] * lambda[l];
    chi(static_cast<Eigen::Index>(k)) = contour.signed_distance({lambda[0], std::sqrt(r2)}) < 0 ? 1.0 : 0.0;
  }
  const Eigen::MatrixXd p = t.basis() * chi.asDiagonal() * t.basis_inverse();
  return CliffordOperator::from_blade_matrix(t.n(), BladeIndex{0}, p);
}

MomentNorms moment_vanishing_check(unsigned n, const CommutingTuple& t, const Contour& contour, unsigned m) {
  check_unit(t, contour);
  require_separated(t, contour, 0.05 * t.spectral_radius());
  const auto f = IntrinsicSliceFunction::monomial(m);
  const double right = contour_integrate_right(f_resolvent_nodes(n, t, contour, Side::right), contour, f).norm();
  const double left = contour_integrate_left(f_resolvent_nodes(n, t, contour, Side::left), contour, f).norm();
  return {right, left};
}

double res2_identity_check(const IntrinsicSliceFunction& f, const CliffordOperator& b, const Contour& contour,
                           const SlicePoint& p) {
  if (p.unit.components() != contour.unit.components()) {
    throw Error(ErrorCode::not_in_slice, "p must lie on the contour's slice");
  }
  if (!(contour.signed_distance(p.to_complex()) <= -0.05 * contour.radius)) {
    throw Error(ErrorCode::point_outside_contour, "p must lie inside the contour with margin 0.05 radius");
  }
  const CliffordNumber pv = slice_embed(p);
  const CliffordOperator bp = b * pv;
  const cplx z = p.to_complex();
  std::vector<CliffordOperator> parts;
  parts.reserve(contour.nodes);
  for (unsigned k = 0; k < contour.nodes; ++k) {
    const SlicePoint s = contour.node(k);
    const cplx lead = f(s.to_complex()) * contour.weight(k) / (2.0 * std::numbers::pi);
    const cplx kernel = 1.0 / (z * z - 2.0 * s.u * z + s.modulus_squared());
    CliffordOperator term = slice_embed(lead * std::conj(s.to_complex()), p.unit) * b;
    term -= slice_embed(lead, p.unit) * bp;
    parts.push_back(term * slice_embed(kernel, p.unit));
  }
  const CliffordOperator integral = pairwise_sum(parts, 0, parts.size());
  return (integral - b * f.at(p)).norm();
}

double cauchy_vanishing_check(const IntrinsicSliceFunction& g, const IntrinsicSliceFunction& f,
                              const Contour& contour) {
  cplx sum = 0.0;
  for (unsigned k = 0; k < contour.nodes; ++k) {
    const cplx z = contour.node(k).to_complex();
    sum += g(z) * contour.weight(k) * f(z);
  }
  return std::abs(sum / (2.0 * std::numbers::pi));
}

CommutingTuple two_cluster_tuple(unsigned n, std::size_t d, std::uint64_t seed, double inner, double outer) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> spread(-1.0, 1.0);
  std::vector<std::vector<double>> values;
  for (std::size_t k = 0; k < d; ++k) {
    const bool in = k < (d + 1) / 2;
    const double radius = in ? inner * (1.0 + 0.2 * spread(rng)) : outer * (1.0 + 0.1 * spread(rng));
    std::vector<double> v(n + 1, 0.0);
    double norm = 0.0;
    for (unsigned l = 1; l <= n; ++l) {
      v[l] = normal(rng);
      norm += v[l] * v[l];
    }
    for (unsigned l = 1; l <= n; ++l) v[l] *= radius / std::sqrt(norm);
    values.push_back(std::move(v));
  }
  return make_commuting_tuple(n, d, seed, SpectrumSpec::explicit_values(std::move(values), true));
}

}  // namespace cliffcalc
