#include <gtest/gtest.h>

#include <cmath>

#include "cliffcalc/error.hpp"
#include "cliffcalc/resolvents.hpp"
#include "test_helpers.hpp"

namespace {

using namespace cliffcalc;
using cliffcalc::testing::random_paravector;
using cliffcalc::testing::random_unit;

CommutingTuple tuple_of(const Paravector& x) {
  std::vector<double> v{x.x0};
  v.insert(v.end(), x.vec.begin(), x.vec.end());
  return make_commuting_tuple(x.n(), 1, 0, SpectrumSpec::explicit_values({v}));
}

CommutingTuple zero_tuple(unsigned n, std::size_t d) { return make_commuting_tuple(n, d, 0, SpectrumSpec::uniform(0, 0)); }

// s on a random slice with |s| = radius, angle drawn away from the real axis.
SlicePoint random_slice_point(unsigned n, double radius, std::mt19937_64& rng) {
  const double angle = std::uniform_real_distribution<double>(0.3, 2.8)(rng);
  return {radius * std::cos(angle), radius * std::sin(angle), random_unit(n, rng)};
}

CliffordNumber s_power(const SlicePoint& s, int k) { return slice_embed(std::pow(s.to_complex(), k), s.unit); }

double rel(const CliffordNumber& a, const CliffordNumber& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

TEST(Gamma, ValuesAndErrors) {
  EXPECT_EQ(cliffcalc::gamma(3).value, -4);
  EXPECT_EQ(cliffcalc::gamma(5).value, 64);
  EXPECT_EQ(cliffcalc::gamma(7).value, -2304);
  EXPECT_DOUBLE_EQ(cliffcalc::gamma(9).as_double(), 147456.0);
  EXPECT_EQ(cliffcalc::gamma(7).h(), 3U);
  EXPECT_EQ(sce_exponent(11), 5U);
  try {
    cliffcalc::gamma(6);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::even_dimension);
  }
}

TEST(PseudoResolvent, ZeroTupleIsInverseSquare) {
  std::mt19937_64 rng(1);
  const SlicePoint s = random_slice_point(3, 1.3, rng);
  const CliffordOperator q = pseudo_resolvent(s, zero_tuple(3, 1));
  EXPECT_LE(rel(CliffordNumber(3, {q.entry(0, 0), q.entry(0, 0) + 8}), s_power(s, -2)), 1e-15);
}

TEST(PseudoResolvent, RealPointAndVectorDiagonal) {
  const std::vector<std::vector<double>> ev{{0, 0.5, 0, 0}, {0, 2.0, 0, 0}};
  const auto t = make_commuting_tuple(3, 2, 7, SpectrumSpec::explicit_values(ev));
  const SlicePoint s{1.5, 0.0, SliceUnit::basis(3, 1)};
  const Eigen::MatrixXd q = pseudo_resolvent(s, t).blade_matrix(BladeIndex{0});
  const Eigen::MatrixXd a = t.component(1);
  const Eigen::MatrixXd expect = (2.25 * Eigen::MatrixXd::Identity(2, 2) + a * a).inverse();
  EXPECT_LE((q - expect).norm(), 1e-13);
  EXPECT_LE((pseudo_resolvent(s, t) - CliffordOperator::from_blade_matrix(3, BladeIndex{0}, expect)).norm(), 1e-13);
}

TEST(PseudoResolvent, InversionResidual) {
  std::mt19937_64 rng(2);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto t = make_commuting_tuple(5, 4, seed, SpectrumSpec::uniform(-1, 1));
    const SlicePoint s = random_slice_point(5, 2.5, rng);
    const CliffordOperator base = pseudo_resolvent_base(s, t).to_operator();
    EXPECT_LE((pseudo_resolvent(s, t) * base - CliffordOperator::identity(5, 4)).norm(), 1e-10);
  }
}

TEST(PseudoResolvent, SpectralPointRejected) {
  const auto t = make_commuting_tuple(3, 2, 1, SpectrumSpec::explicit_values({{0.5, 1, 0, 0}, {0, 0, 2, 0}}));
  try {
    pseudo_resolvent({0.5, 1.0, SliceUnit::basis(3, 3)}, t);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::spectral_point);
  }
}

TEST(SResolvent, ZeroTupleAndEquation) {
  std::mt19937_64 rng(3);
  const SlicePoint s = random_slice_point(5, 0.8, rng);
  const auto zero = zero_tuple(5, 2);
  const CliffordOperator inv = CliffordOperator::from_number(s_power(s, -1), 2);
  EXPECT_LE((s_resolvent_left(s, zero) - inv).norm(), 1e-15);
  EXPECT_LE((s_resolvent_right(s, zero) - inv).norm(), 1e-15);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto t = make_commuting_tuple(5, 3, seed, SpectrumSpec::uniform(-1, 1));
    const SlicePoint p = random_slice_point(5, 2.0, rng);
    const CliffordNumber pv = slice_embed(p);
    const CliffordOperator id = CliffordOperator::identity(5, 3);
    const CliffordOperator sl = s_resolvent_left(p, t);
    const CliffordOperator sr = s_resolvent_right(p, t);
    EXPECT_LE((sl * pv - t.as_operator() * sl - id).norm(), 1e-10 * std::max(1.0, sl.norm()));
    EXPECT_LE((pv * sr - sr * t.as_operator() - id).norm(), 1e-10 * std::max(1.0, sr.norm()));
  }
}

TEST(SResolvent, MatchesScalarKernelAtDimensionOne) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 10; ++k) {
    const Paravector x{0.0, {0.7, 0.0, 0.0}};
    const SlicePoint s = random_slice_point(3, 1.9, rng);
    const CliffordOperator op = s_resolvent_left(s, tuple_of(x));
    EXPECT_LE(rel(CliffordNumber(3, {op.entry(0, 0), op.entry(0, 0) + 8}), s_kernel_left(s, x)), 1e-13);
  }
}

TEST(FResolvent, ZeroTupleIsGammaPower) {
  std::mt19937_64 rng(5);
  for (unsigned n : {3U, 5U, 7U}) {
    const SlicePoint s = random_slice_point(n, 1.1, rng);
    const CliffordOperator expect =
        CliffordOperator::from_number(cliffcalc::gamma(n).as_double() * s_power(s, -static_cast<int>(n)), 2);
    EXPECT_LE((f_resolvent_left(n, s, zero_tuple(n, 2)) - expect).norm(), 1e-12 * expect.norm());
    EXPECT_LE((f_resolvent_right(n, s, zero_tuple(n, 2)) - expect).norm(), 1e-12 * expect.norm());
  }
}

TEST(FResolvent, MatchesScalarKernelAtDimensionOne) {
  std::mt19937_64 rng(6);
  for (unsigned n : {3U, 5U, 7U}) {
    for (int k = 0; k < 5; ++k) {
      const Paravector x = random_paravector(n, rng);
      const SlicePoint s = random_slice_point(n, 3.0 + pv_modulus(x), rng);
      const auto t = tuple_of(x);
      const std::size_t size = std::size_t{1} << n;
      const CliffordOperator fl = f_resolvent_left(n, s, t);
      const CliffordOperator fr = f_resolvent_right(n, s, t);
      const CliffordNumber kl = f_kernel_left(n, s, x);
      const CliffordNumber kr = f_kernel_right(n, s, x);
      EXPECT_LE(rel(CliffordNumber(n, {fl.entry(0, 0), fl.entry(0, 0) + size}), kl), 1e-12 * std::max(1.0, kl.norm()));
      EXPECT_LE(rel(CliffordNumber(n, {fr.entry(0, 0), fr.entry(0, 0) + size}), kr), 1e-12 * std::max(1.0, kr.norm()));
    }
  }
}

TEST(FResolvent, GrowsTowardSpectralPoint) {
  const auto t = make_commuting_tuple(5, 2, 3, SpectrumSpec::explicit_values({{0, 1, 0, 0, 0, 0}, {0, 0, 2, 0, 0, 0}}));
  const SliceUnit unit = SliceUnit::basis(5, 4);
  double previous = 0.0;
  for (double eps : {0.5, 0.1, 0.02, 0.004}) {
    const double norm = f_resolvent_left(5, {0.0, 1.0 + eps, unit}, t).norm();
    EXPECT_GT(norm, previous);
    previous = norm;
  }
}

TEST(FKernel, ZeroPointAndSameSphere) {
  std::mt19937_64 rng(7);
  const SlicePoint s = random_slice_point(5, 1.4, rng);
  const CliffordNumber expect = cliffcalc::gamma(5).as_double() * s_power(s, -5);
  EXPECT_LE(rel(f_kernel_left(5, s, Paravector{0.0, std::vector<double>(5)}), expect), 1e-14);
  // Same sphere as s, different slice.
  const SliceUnit other = random_unit(5, rng);
  std::vector<double> vec(5);
  for (unsigned k = 0; k < 5; ++k) vec[k] = s.v * other.components()[k];
  try {
    f_kernel_left(5, s, Paravector{s.u, vec});
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::same_sphere);
  }
}

TEST(FKernel, FiniteDifferenceLaplacianOfCauchyKernel) {
  std::mt19937_64 rng(8);
  const double step = 1e-3;
  for (int k = 0; k < 10; ++k) {
    const Paravector x = random_paravector(3, rng, 0.5);
    const SlicePoint s = random_slice_point(3, 2.0, rng);
    const CliffordNumber center = s_kernel_left(s, x);
    CliffordNumber lap = CliffordNumber::scalar(3, 0.0);
    for (unsigned i = 0; i <= 3; ++i) {
      Paravector plus = x;
      Paravector minus = x;
      double& pc = i == 0 ? plus.x0 : plus.vec[i - 1];
      double& mc = i == 0 ? minus.x0 : minus.vec[i - 1];
      pc += step;
      mc -= step;
      lap += (s_kernel_left(s, plus) + s_kernel_left(s, minus) - 2.0 * center) * (1.0 / (step * step));
    }
    EXPECT_LE((lap - f_kernel_left(3, s, x)).norm(), 1e-4);
  }
}

TEST(FKernel, RightSliceHolomorphicInS) {
  std::mt19937_64 rng(9);
  const double step = 1e-4;
  for (unsigned n : {3U, 5U}) {
    for (int k = 0; k < 5; ++k) {
      const Paravector x = random_paravector(n, rng, 0.4);
      const SlicePoint s = random_slice_point(n, 2.0, rng);
      auto at = [&](double du, double dv) { return f_kernel_left(n, {s.u + du, s.v + dv, s.unit}, x); };
      const CliffordNumber du = (at(step, 0) - at(-step, 0)) * (0.5 / step);
      const CliffordNumber dv = (at(0, step) - at(0, -step)) * (0.5 / step);
      const CliffordNumber cr = du + dv * s.unit.to_clifford();
      EXPECT_LE(cr.norm() / std::max(1.0, du.norm()), 1e-6);
    }
  }
}

TEST(LaplacianPower, Examples) {
  std::mt19937_64 rng(10);
  const Paravector x = random_paravector(3, rng);
  EXPECT_EQ(laplacian_power_monomial(3, 1, x).norm(), 0.0);
  EXPECT_LE(rel(laplacian_power_monomial(3, 2, x), CliffordNumber::scalar(3, -4.0)), 1e-15);
  const CliffordNumber xc = x.to_clifford();
  const CliffordNumber expect = -8.0 * xc - 4.0 * pv_conjugate(x).to_clifford();
  EXPECT_LE(rel(laplacian_power_monomial(3, 3, x), expect), 1e-14);
  for (unsigned n : {5U, 7U}) {
    const Paravector y = random_paravector(n, rng);
    EXPECT_EQ(laplacian_power_monomial(n, n - 2, y).norm(), 0.0);
    EXPECT_LE(rel(laplacian_power_monomial(n, n - 1, y), CliffordNumber::scalar(n, cliffcalc::gamma(n).as_double())), 1e-15);
  }
}

TEST(LaplacianPower, FiniteDifferenceOfCube) {
  std::mt19937_64 rng(11);
  const Paravector x = random_paravector(3, rng);
  const double step = 1e-3;
  auto cube = [](const Paravector& y) {
    const CliffordNumber c = y.to_clifford();
    return c * c * c;
  };
  CliffordNumber lap = CliffordNumber::scalar(3, 0.0);
  for (unsigned i = 0; i <= 3; ++i) {
    Paravector plus = x;
    Paravector minus = x;
    (i == 0 ? plus.x0 : plus.vec[i - 1]) += step;
    (i == 0 ? minus.x0 : minus.vec[i - 1]) -= step;
    lap += (cube(plus) + cube(minus) - 2.0 * cube(x)) * (1.0 / (step * step));
  }
  EXPECT_LE((lap - laplacian_power_monomial(3, 3, x)).norm(), 1e-6);
}

TEST(FKernelSeries, ZeroPointKeepsOnlyLeadingTerm) {
  std::mt19937_64 rng(12);
  for (unsigned n : {3U, 5U, 7U}) {
    const SlicePoint s = random_slice_point(n, 1.2, rng);
    const Paravector zero{0.0, std::vector<double>(n)};
    const CliffordNumber expect = cliffcalc::gamma(n).as_double() * s_power(s, -static_cast<int>(n));
    EXPECT_LE(rel(f_kernel_series_left(n, s, zero, n - 1), expect), 1e-14);
    EXPECT_LE(rel(f_kernel_series_left(n, s, zero, 40), expect), 1e-14);
  }
}

TEST(FKernelSeries, ConvergesGeometrically) {
  std::mt19937_64 rng(13);
  for (unsigned n : {3U, 5U, 7U}) {
    const Paravector x = random_paravector(n, rng);
    const SlicePoint s = random_slice_point(n, 2.0 * pv_modulus(x), rng);
    const CliffordNumber exact = f_kernel_left(n, s, x);
    EXPECT_LE((f_kernel_series_left(n, s, x, 80) - exact).norm(), 1e-8 * exact.norm());
    EXPECT_LE((f_kernel_series_right(n, s, x, 80) - f_kernel_right(n, s, x)).norm(), 1e-8 * exact.norm());
    const SeriesStudy study = series_convergence(n, s, x, 80);
    EXPECT_NEAR(study.fitted_ratio, 0.5, 0.05);
    for (std::size_t k = 0; k + 10 < study.errors.size(); ++k)
      if (study.truncations[k] >= 30) {
        EXPECT_LE(study.errors[k + 10], study.errors[k] + 1e-14);
      }
  }
}

TEST(FKernelSeries, DivergentRegionRejected) {
  std::mt19937_64 rng(14);
  const Paravector x = random_paravector(5, rng);
  const SlicePoint s = random_slice_point(5, 0.9 * pv_modulus(x), rng);
  try {
    f_kernel_series_left(5, s, x, 20);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::divergent_region);
  }
  const auto t = make_commuting_tuple(5, 2, 1, SpectrumSpec::uniform(-1, 1));
  EXPECT_THROW(f_resolvent_series_left(5, {0.0, 0.5 * t.spectral_radius(), s.unit}, t, 20), Error);
}

TEST(FResolventSeries, MatchesClosedForm) {
  std::mt19937_64 rng(15);
  for (unsigned n : {3U, 5U}) {
    const auto t = make_commuting_tuple(n, 3, 21, SpectrumSpec::uniform(-0.5, 0.5));
    const SlicePoint s = random_slice_point(n, 3.0 * t.spectral_radius(), rng);
    const CliffordOperator fl = f_resolvent_left(n, s, t);
    const CliffordOperator fr = f_resolvent_right(n, s, t);
    EXPECT_LE((f_resolvent_series_left(n, s, t, 60) - fl).norm(), 1e-9 * fl.norm());
    EXPECT_LE((f_resolvent_series_right(n, s, t, 60) - fr).norm(), 1e-9 * fr.norm());
  }
}

TEST(LrFResolvent, ZeroTupleAndRandomTuples) {
  std::mt19937_64 rng(16);
  const LrResidual zero = lr_f_resolvent_residual(5, random_slice_point(5, 1.5, rng), zero_tuple(5, 2));
  EXPECT_LE(zero.left, 1e-14);
  EXPECT_LE(zero.right, 1e-14);
  for (unsigned n : {5U, 7U, 9U}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto t = make_commuting_tuple(n, 4, seed, SpectrumSpec::uniform(-1, 1));
      const SlicePoint s = random_slice_point(n, 2.0 + t.spectral_radius(), rng);
      const LrResidual r = lr_f_resolvent_residual(n, s, t);
      EXPECT_LE(r.left, 1e-10);
      EXPECT_LE(r.right, 1e-10);
      const LrResidual rotated = lr_f_resolvent_residual(n, s.with_unit(random_unit(n, rng)), t);
      EXPECT_NEAR(rotated.left, r.left, 1e-11);
      EXPECT_NEAR(rotated.right, r.right, 1e-11);
    }
  }
}

}  // namespace
