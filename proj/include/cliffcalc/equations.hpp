#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cliffcalc/operator.hpp"

namespace cliffcalc {

enum class EquationId {
  s_eq,
  f3,
  f5_pseudo,
  f5_full,
  f7_pseudo,
  f7_full,
  gen_pseudo,
  pseudo_f_h_odd,
  pseudo_f_h_even,
};

inline constexpr EquationId all_equations[] = {
    EquationId::s_eq,      EquationId::f3,      EquationId::f5_pseudo,
    EquationId::f5_full,   EquationId::f7_pseudo, EquationId::f7_full,
    EquationId::gen_pseudo, EquationId::pseudo_f_h_odd, EquationId::pseudo_f_h_even,
};

std::string_view to_string(EquationId id) noexcept;
// Accepts "F5_FULL" or "f5_full"; throws BadSpec otherwise.
EquationId parse_equation_id(std::string_view text);
bool equation_applies(EquationId id, unsigned n);
std::vector<EquationId> equations_for(unsigned n);

// One monomial of an identity's left-hand side, stored without its coefficient. Terms sharing a
// displayed constant prefactor (gamma_n, 1/gamma_n, a binomial) share a group; `multiplicity` is the
// term's own integer factor as displayed, so coef = +-multiplicity * group constant.
struct Term {
  std::string label;
  std::string group;
  double coef;
  int multiplicity;
  CliffordOperator value;
};

// sum_k coef_k value_k = rhs.
struct EquationSystem {
  EquationId id;
  unsigned n;
  std::vector<Term> lhs;
  CliffordOperator rhs;
};

struct Perturbation {
  enum class Mode { none, scale_term, scale_group, drop_term };
  Mode mode = Mode::none;
  std::size_t index = 0;
  std::string group;
  double factor = 1.01;

  static Perturbation none() { return {}; }
  static Perturbation scale_term(std::size_t k, double factor = 1.01) { return {Mode::scale_term, k, {}, factor}; }
  static Perturbation scale_group(std::string name, double factor = 1.01) {
    return {Mode::scale_group, 0, std::move(name), factor};
  }
  static Perturbation drop_term(std::size_t k) { return {Mode::drop_term, k, {}, 0.0}; }
};

struct ResidualReport {
  EquationId equation_id;
  unsigned n = 0;
  std::size_t d = 0;
  std::uint64_t seed = 0;
  SlicePoint s;
  SlicePoint p;
  double lhs_norm = 0.0;
  double rhs_norm = 0.0;
  double residual_abs = 0.0;
  double residual_rel = 0.0;
  double commutator_noise = 0.0;
};

nlohmann::ordered_json to_json(const ResidualReport& report);

// [(A - B) p - sbar (A - B)] (p^2 - 2 s0 p + |s|^2)^{-1}. Throws SameSphere when p is in [s].
CliffordOperator shared_rhs(const CliffordOperator& a, const CliffordOperator& b, const SlicePoint& s,
                            const SlicePoint& p);
// shared_rhs with A = F^R(s, T), B = F^L(p, T).
CliffordOperator f_shared_rhs(unsigned n, const SlicePoint& s, const SlicePoint& p, const CommutingTuple& t);

// Builds every term of the identity. Throws SpectralPoint, SameSphere, NotInSlice (s, p on different
// slices), OddDimension / HParityMismatch / DimensionMismatch when the equation does not apply to n.
EquationSystem assemble_equation(EquationId id, const CommutingTuple& t, const SlicePoint& s, const SlicePoint& p);
ResidualReport evaluate_system(const EquationSystem& system, const CommutingTuple& t, const SlicePoint& s,
                               const SlicePoint& p, const Perturbation& perturbation = Perturbation::none());
ResidualReport equation_residual(EquationId id, const CommutingTuple& t, const SlicePoint& s, const SlicePoint& p,
                                 const Perturbation& perturbation = Perturbation::none());

ResidualReport s_resolvent_eq_residual(const SlicePoint& s, const SlicePoint& p, const CommutingTuple& t);
ResidualReport f_eq_n3_residual(const SlicePoint& s, const SlicePoint& p, const CommutingTuple& t);
ResidualReport f_eq_n5_pseudo_residual(const SlicePoint& s, const SlicePoint& p, const CommutingTuple& t);
ResidualReport f_eq_n5_full_residual(const SlicePoint& s, const SlicePoint& p, const CommutingTuple& t);
ResidualReport f_eq_n7_pseudo_residual(const SlicePoint& s, const SlicePoint& p, const CommutingTuple& t);
ResidualReport f_eq_n7_full_residual(const SlicePoint& s, const SlicePoint& p, const CommutingTuple& t);
ResidualReport f_eq_general_residual(unsigned n, const SlicePoint& s, const SlicePoint& p, const CommutingTuple& t);
ResidualReport pseudo_f_eq_h_odd_residual(unsigned n, const SlicePoint& s, const SlicePoint& p,
                                          const CommutingTuple& t);
ResidualReport pseudo_f_eq_h_even_residual(unsigned n, const SlicePoint& s, const SlicePoint& p,
                                           const CommutingTuple& t);

// Draws s, p on one random slice, at least `margin` * max(1, spectral radius) away from every
// sphere point and with |p^2 - 2 s0 p + |s|^2| >= 0.1 (|p|^2 + |s|^2).
std::pair<SlicePoint, SlicePoint> sample_admissible_points(const CommutingTuple& t, std::mt19937_64& rng,
                                                           double margin = 0.3);

struct SubstitutionStep {
  std::string name;
  double residual_rel;
};

struct SubstitutionChain {
  std::vector<SubstitutionStep> steps;
  std::optional<std::size_t> first_failing;
};

// Evaluates the identities a full form is derived from, in derivation order, and flags the first
// one whose residual exceeds tol.
SubstitutionChain bisect_substitutions(EquationId id, const CommutingTuple& t, const SlicePoint& s,
                                       const SlicePoint& p, double tol);

// |residual_rel at (s, p) - residual_rel after moving both points to slice `other`|.
double slice_rotation_gap(EquationId id, const CommutingTuple& t, const SlicePoint& s, const SlicePoint& p,
                          const SliceUnit& other);
// |residual_rel(T, s, p) - residual_rel(cT, cs, cp)|.
double scaling_covariance_gap(EquationId id, const CommutingTuple& t, const SlicePoint& s, const SlicePoint& p,
                              double c);

}  // namespace cliffcalc
