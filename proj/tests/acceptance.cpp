#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cliffcalc/calculus.hpp"
#include "cliffcalc/combinatorics.hpp"
#include "cliffcalc/equations.hpp"
#include "cliffcalc/resolvents.hpp"

namespace {

using namespace cliffcalc;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

// h 4^h (-1)^h h! (h-1)!, computed here without the library's factorial.
ExactInteger top_constant(unsigned h) {
  ExactInteger hf = 1;
  for (unsigned k = 2; k <= h; ++k) hf *= k;
  const ExactInteger hm1f = hf / h;
  ExactInteger four_h = 1;
  for (unsigned k = 0; k < h; ++k) four_h *= 4;
  return (h % 2 == 0 ? 1 : -1) * ExactInteger(h) * four_h * hf * hm1f;
}

SliceUnit random_unit(unsigned n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> c(n);
  for (double& x : c) x = normal(rng);
  return SliceUnit::normalized(std::move(c));
}

Paravector random_paravector(unsigned n, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  Paravector x{normal(rng), std::vector<double>(n)};
  for (double& v : x.vec) v = normal(rng);
  return x;
}

SlicePoint point_at(unsigned n, double modulus, std::mt19937_64& rng) {
  const double angle = std::uniform_real_distribution<double>(0.3, 2.8)(rng);
  return {modulus * std::cos(angle), modulus * std::sin(angle), random_unit(n, rng)};
}

Outcome exact_combinatorics() {
  std::size_t sums = 0;
  for (unsigned h = 1; h <= 6; ++h) {
    for (unsigned m = 2 * h; m <= 2 * h + 40; ++m) {
      if (!appendix_identity_check(m, h)) return {false, fmt("identity fails at m=%g h=%g", m, h)};
      ++sums;
    }
  }
  for (unsigned h = 1; h <= 8; ++h)
    if (k_coeff_exact(2 * h, h, 1) != top_constant(h)) return {false, fmt("K_1(2h,h) differs at h=%g", h)};
  return {true, fmt("%g exact sums, K_1(2h,h) for h=1..8", static_cast<double>(sums))};
}

Outcome gamma_coherence() {
  for (unsigned n = 3; n <= 13; n += 2) {
    if (gamma_exact(n) != top_constant((n - 1) / 2)) return {false, fmt("mismatch at n=%g", n)};
    if (!gamma_series_coherence(n)) return {false, fmt("library coherence check fails at n=%g", n)};
  }
  return {true, "n = 3..13 exact"};
}

Outcome series_convergence_check() {
  std::mt19937_64 rng(301);
  double worst_error = 0.0;
  double worst_ratio_gap = 0.0;
  for (unsigned n : {3U, 5U, 7U}) {
    for (int k = 0; k < 5; ++k) {
      const Paravector x = random_paravector(n, rng, 1.0);
      const SlicePoint s = point_at(n, 2.0 * pv_modulus(x), rng);
      const SeriesStudy study = series_convergence(n, s, x, 80);
      worst_error = std::max(worst_error, study.errors.back());
      worst_ratio_gap = std::max(worst_ratio_gap, std::abs(study.fitted_ratio - 0.5));
    }
  }
  return {worst_error <= 1e-8 && worst_ratio_gap <= 0.05,
          fmt("max rel error %.2e at M=80, max |ratio-0.5| %.3f", worst_error, worst_ratio_gap)};
}

Outcome lr_equations() {
  double worst = 0.0;
  for (unsigned n : {5U, 7U, 9U}) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto t = make_commuting_tuple(n, 4, 400 + seed, SpectrumSpec::uniform(-1, 1, seed % 2 == 1));
      std::mt19937_64 rng(seed);
      const auto [s, p] = sample_admissible_points(t, rng);
      for (const SlicePoint& z : {s, p}) {
        const LrResidual r = lr_f_resolvent_residual(n, z, t);
        worst = std::max({worst, r.left, r.right});
      }
    }
  }
  return {worst <= 1e-10, fmt("max residual_rel %.2e over 300 evaluations", worst)};
}

double sweep(EquationId id, unsigned n, std::size_t d, int trials, std::uint64_t base) {
  double worst = 0.0;
  for (int k = 0; k < trials; ++k) {
    const auto t = make_commuting_tuple(n, d, base + k, SpectrumSpec::uniform(-1, 1, k % 2 == 1));
    std::mt19937_64 rng(base + k);
    const auto [s, p] = sample_admissible_points(t, rng);
    worst = std::max(worst, equation_residual(id, t, s, p).residual_rel);
  }
  return worst;
}

Outcome s_equation() {
  double worst = 0.0;
  for (unsigned n : {3U, 5U, 7U}) worst = std::max(worst, sweep(EquationId::s_eq, n, 4, 50, 500));
  return {worst <= 1e-10, fmt("max residual_rel %.2e", worst)};
}

double specialization_gap(EquationId special, unsigned n, int trials) {
  double worst = 0.0;
  for (int k = 0; k < trials; ++k) {
    const auto t = make_commuting_tuple(n, 4, 650 + k, SpectrumSpec::uniform(-1, 1));
    std::mt19937_64 rng(k);
    const auto [s, p] = sample_admissible_points(t, rng);
    const EquationSystem general = assemble_equation(EquationId::gen_pseudo, t, s, p);
    const EquationSystem specific = assemble_equation(special, t, s, p);
    CliffordOperator gap = general.rhs - specific.rhs;
    for (const Term& term : general.lhs) gap.add_scaled(term.coef, term.value);
    for (const Term& term : specific.lhs) gap.add_scaled(-term.coef, term.value);
    worst = std::max(worst, gap.norm() / std::max(1.0, general.rhs.norm()));
  }
  return worst;
}

Outcome f_equations() {
  const double f3 = sweep(EquationId::f3, 3, 4, 20, 600);
  const double f5 = std::max(sweep(EquationId::f5_pseudo, 5, 4, 20, 610), sweep(EquationId::f5_full, 5, 4, 20, 620));
  const double f7 = std::max(sweep(EquationId::f7_pseudo, 7, 4, 20, 630), sweep(EquationId::f7_full, 7, 4, 20, 640));
  double gen = 0.0;
  for (unsigned n : {5U, 7U, 9U}) gen = std::max(gen, sweep(EquationId::gen_pseudo, n, 4, 20, 660 + n));
  const double special =
      std::max(specialization_gap(EquationId::f5_pseudo, 5, 10), specialization_gap(EquationId::f7_pseudo, 7, 10));
  const bool pass = f3 <= 1e-9 && f5 <= 1e-9 && f7 <= 1e-8 && gen <= 1e-8 && special <= 1e-12;
  return {pass, fmt("n=3 %.1e, n=5 %.1e, n=7 %.1e, general %.1e", f3, f5, f7, gen) +
                    fmt(", specialization gap %.1e", special)};
}

Outcome pseudo_f_equations() {
  const double odd7 = sweep(EquationId::pseudo_f_h_odd, 7, 4, 20, 700);
  const double odd11 = sweep(EquationId::pseudo_f_h_odd, 11, 2, 20, 720);
  const double even5 = sweep(EquationId::pseudo_f_h_even, 5, 4, 20, 740);
  const double even9 = sweep(EquationId::pseudo_f_h_even, 9, 4, 20, 760);
  const double worst = std::max({odd7, odd11, even5, even9});
  return {worst <= 1e-7, fmt("h odd n=7 %.1e, n=11 %.1e; h even n=5 %.1e, n=9 %.1e", odd7, odd11, even5, even9)};
}

Outcome moment_vanishing() {
  double worst = 0.0;
  double weakest_witness = 1e300;
  for (unsigned n : {5U, 7U}) {
    const unsigned h = (n - 1) / 2;
    const double g = std::abs(cliffcalc::gamma(n).as_double());
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto t = two_cluster_tuple(n, 4, 800 + seed);
      std::mt19937_64 rng(seed);
      const Contour c{0, 0, 2.0 * t.spectral_radius(), 256, random_unit(n, rng)};
      for (unsigned m = 0; m < 2 * h; ++m) {
        const MomentNorms norms = moment_vanishing_check(n, t, c, m);
        worst = std::max({worst, norms.right, norms.left});
      }
      weakest_witness = std::min(weakest_witness, moment_vanishing_check(n, t, c, 2 * h).right / g);
    }
  }
  return {worst <= 1e-9 && weakest_witness >= 0.1,
          fmt("max low-moment norm %.2e; m=2h witness %.2f |gamma_n|", worst, weakest_witness)};
}

Outcome riesz_projectors() {
  double idem = 0.0, lr = 0.0, radius = 0.0, full = 0.0, empty = 0.0;
  for (unsigned n : {5U, 7U}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto t = two_cluster_tuple(n, 4, 900 + seed);
      std::mt19937_64 rng(seed);
      const Contour c{0, 0, 2.0, 256, random_unit(n, rng)};
      const ProjectorResult left = riesz_projector(n, t, c, Side::left);
      const ProjectorResult right = riesz_projector(n, t, c, Side::right);
      idem = std::max({idem, left.idempotency_gap, right.idempotency_gap});
      lr = std::max({lr, left.left_right_gap, (left.projector - right.projector).norm()});
      radius = std::max(radius, (riesz_projector(n, t, c.with_radius(2.2), Side::left).projector - left.projector).norm());
      const CliffordOperator id = CliffordOperator::identity(n, 4);
      full = std::max(full, (riesz_projector(n, t, c.with_radius(2.0 * t.spectral_radius()), Side::left).projector - id).norm());
      empty = std::max(empty, riesz_projector(n, t, c.with_radius(0.3), Side::right).projector.norm());
    }
  }
  const bool pass = idem <= 1e-8 && lr <= 1e-8 && radius <= 1e-8 && full <= 1e-9 && empty <= 1e-10;
  return {pass, fmt("P^2-P %.1e, left/right %.1e, radius %.1e, ", idem, lr, radius) +
                    fmt("full-Id %.1e, empty %.1e", full, empty)};
}

Outcome integral_lemmas() {
  std::mt19937_64 rng(1000);
  std::normal_distribution<double> normal(0.0, 1.0);
  double kernel_gap = 0.0;
  for (unsigned n : {3U, 5U, 7U}) {
    const SliceUnit unit = random_unit(n, rng);
    const Contour c{0.1, 0.2, 1.5, 256, unit};
    const SlicePoint p{0.3, 0.4, unit};
    CliffordOperator b(n, 3);
    for (unsigned mask = 0; mask < (1U << n); ++mask) {
      Eigen::MatrixXd m(3, 3);
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
      b.add_blade_matrix(BladeIndex{mask}, m);
    }
    kernel_gap = std::max(kernel_gap, res2_identity_check(IntrinsicSliceFunction::monomial(2), b, c, p) / b.norm());
    kernel_gap = std::max(kernel_gap, res2_identity_check(IntrinsicSliceFunction::monomial(0), CliffordOperator::identity(n, 3), c, p));
  }
  const Contour unit_circle{0, 0, 1, 256, SliceUnit::basis(3, 2)};
  const auto one = IntrinsicSliceFunction::monomial(0);
  const double cauchy = std::max(cauchy_vanishing_check(one, one, unit_circle),
                                 cauchy_vanishing_check(IntrinsicSliceFunction::monomial(3),
                                                        IntrinsicSliceFunction::rational({0, 0, 1}, {3.25, -3.0, 1}),
                                                        unit_circle));
  const double witness = cauchy_vanishing_check(one, IntrinsicSliceFunction::rational({1}, {-0.2, 1}), unit_circle);
  return {kernel_gap <= 1e-9 && cauchy <= 1e-9 && witness >= 0.1,
          fmt("two-point kernel %.1e, Cauchy %.1e, pole-inside witness %.3f", kernel_gap, cauchy, witness)};
}

Outcome sensitivity() {
  struct Case {
    EquationId id;
    unsigned n;
    std::size_t d;
  };
  const Case cases[] = {
      {EquationId::s_eq, 3, 3},           {EquationId::f3, 3, 3},
      {EquationId::f5_pseudo, 5, 3},      {EquationId::f5_full, 5, 3},
      {EquationId::f7_pseudo, 7, 3},      {EquationId::f7_full, 7, 3},
      {EquationId::gen_pseudo, 5, 3},     {EquationId::gen_pseudo, 7, 3},
      {EquationId::gen_pseudo, 9, 3},     {EquationId::pseudo_f_h_odd, 7, 3},
      {EquationId::pseudo_f_h_odd, 11, 2}, {EquationId::pseudo_f_h_even, 5, 3},
      {EquationId::pseudo_f_h_even, 9, 3},
  };
  double min_drop = 1e300;
  double min_scale = 1e300;
  std::size_t checks = 0;
  std::string weakest;
  for (const Case& c : cases) {
    for (std::uint64_t seed = 0; seed < 2; ++seed) {
      const auto t = make_commuting_tuple(c.n, c.d, 1100 + seed, SpectrumSpec::uniform(-1, 1, seed == 1));
      std::mt19937_64 rng(seed);
      const auto [s, p] = sample_admissible_points(t, rng);
      const EquationSystem system = assemble_equation(c.id, t, s, p);
      std::set<std::string> groups;
      auto record = [&](double value, double& slot, const std::string& what) {
        ++checks;
        if (value < slot) {
          slot = value;
          if (value < 1e-4) weakest = std::string(to_string(c.id)) + " n=" + std::to_string(c.n) + " " + what;
        }
      };
      for (std::size_t k = 0; k < system.lhs.size(); ++k) {
        const Term& term = system.lhs[k];
        groups.insert(term.group);
        record(evaluate_system(system, t, s, p, Perturbation::drop_term(k)).residual_rel, min_drop, "drop " + term.label);
        if (std::abs(term.multiplicity) > 1)
          record(evaluate_system(system, t, s, p, Perturbation::scale_term(k)).residual_rel, min_scale,
                 "scale " + term.label);
      }
      for (const std::string& g : groups)
        record(evaluate_system(system, t, s, p, Perturbation::scale_group(g)).residual_rel, min_scale, "group " + g);
    }
  }
  const bool pass = min_drop >= 1e-4 && min_scale >= 1e-4;
  std::string detail = fmt("%g perturbations, min ablation %.2e, min 1%% coefficient %.2e",
                           static_cast<double>(checks), min_drop, min_scale);
  if (!pass) detail += "; weakest: " + weakest;
  return {pass, detail};
}

Outcome laplacian_spot_check() {
  std::mt19937_64 rng(1200);
  const double step = 1e-3;
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Paravector x = random_paravector(3, rng, 0.5);
    const SlicePoint s = point_at(3, 2.0, rng);
    const CliffordNumber center = s_kernel_left(s, x);
    CliffordNumber lap = CliffordNumber::scalar(3, 0.0);
    for (unsigned i = 0; i <= 3; ++i) {
      Paravector plus = x;
      Paravector minus = x;
      (i == 0 ? plus.x0 : plus.vec[i - 1]) += step;
      (i == 0 ? minus.x0 : minus.vec[i - 1]) -= step;
      lap += (s_kernel_left(s, plus) + s_kernel_left(s, minus) - 2.0 * center) * (1.0 / (step * step));
    }
    worst = std::max(worst, (lap - f_kernel_left(3, s, x)).norm());
  }
  return {worst <= 1e-4, fmt("max |finite-difference Laplacian - F_3^L| %.2e at 10 points", worst)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"exact combinatorics", exact_combinatorics},
      {"gamma coherence", gamma_coherence},
      {"series convergence", series_convergence_check},
      {"left/right F-resolvent equations", lr_equations},
      {"S-resolvent equation", s_equation},
      {"F-resolvent equations", f_equations},
      {"pseudo F-resolvent equations", pseudo_f_equations},
      {"moment vanishing", moment_vanishing},
      {"Riesz projectors", riesz_projectors},
      {"integral lemmas", integral_lemmas},
      {"sensitivity", sensitivity},
      {"Laplacian spot check", laplacian_spot_check},
  };
  int failures = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  %2d %-34s %s (%.1fs)\n", outcome.pass ? "PASS" : "FAIL", index, c.name, outcome.detail.c_str(),
                seconds);
    if (!outcome.pass) ++failures;
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
