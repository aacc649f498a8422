#include "farrow/spline_core.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "test_util.hpp"

namespace farrow {
namespace {

using testing::poly_derivative;
using testing::random_window;
using testing::window_from_poly;

constexpr InterpolatorKind kAllKinds[] = {InterpolatorKind::Lp3, InterpolatorKind::Hs3, InterpolatorKind::Hs5,
                                          InterpolatorKind::Hs7};

void expect_coeffs(const SplineCoefficients& c, const std::vector<double>& expected, double tol = 1e-12) {
  ASSERT_EQ(c.a().size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(c.a()[i], expected[i], tol) << "a" << i;
}

// Residuals of the kind's own constraint list, computed without the solver.
std::vector<double> constraint_residuals(InterpolatorKind kind, const SplineCoefficients& c, const SampleWindow& w) {
  const auto a = c.a();
  std::vector<double> r;
  const auto val = [&](double t) { return poly_derivative(a, 0, t); };
  const auto d1 = [&](double t) { return poly_derivative(a, 1, t); };
  const auto d2 = [&](double t) { return poly_derivative(a, 2, t); };
  if (kind != InterpolatorKind::Hs3) {
    r.push_back(val(1.0) - w.s_n);
    r.push_back(val(-2.0) - w.s_nm3);
  }
  r.push_back(val(0.0) - w.s_nm1);
  r.push_back(val(-1.0) - w.s_nm2);
  if (kind != InterpolatorKind::Lp3) {
    r.push_back(d1(0.0) - w.d1_nm1);
    r.push_back(d1(-1.0) - w.d1_nm2);
  }
  if (kind == InterpolatorKind::Hs7) {
    r.push_back(d2(0.0) - w.d2_nm1);
    r.push_back(d2(-1.0) - w.d2_nm2);
  }
  return r;
}

TEST(SplineCore, KindMetadata) {
  EXPECT_EQ(polynomial_order(InterpolatorKind::Lp3), 3);
  EXPECT_EQ(polynomial_order(InterpolatorKind::Hs3), 3);
  EXPECT_EQ(polynomial_order(InterpolatorKind::Hs5), 5);
  EXPECT_EQ(polynomial_order(InterpolatorKind::Hs7), 7);
  EXPECT_EQ(parse_kind("HS5"), InterpolatorKind::Hs5);
  EXPECT_THROW(parse_kind("hs9"), std::invalid_argument);
  for (auto k : kAllKinds) EXPECT_EQ(parse_kind(to_string(k)), k);
}

TEST(SplineCore, SolveReproducesConstant) {
  SampleWindow w{2, 2, 2, 2, 0, 0, 0, 0};
  expect_coeffs(solve_constraint_system(InterpolatorKind::Hs3, w), {2, 0, 0, 0});
}

TEST(SplineCore, SolveReproducesRamp) {
  SampleWindow w{1, 0, -1, -2, 1, 1, 0, 0};
  expect_coeffs(solve_constraint_system(InterpolatorKind::Hs5, w), {0, 1, 0, 0, 0, 0});
}

TEST(SplineCore, SolveSatisfiesEveryConstraint) {
  std::mt19937_64 rng(7);
  for (auto kind : kAllKinds) {
    for (int i = 0; i < 50; ++i) {
      const SampleWindow w = random_window(rng);
      for (double r : constraint_residuals(kind, solve_constraint_system(kind, w), w)) EXPECT_NEAR(r, 0.0, 1e-10);
    }
  }
}

TEST(SplineCore, Hermite5UnitSample) {
  SampleWindow w;
  w.s_nm1 = 1.0;
  const std::vector<double> expected{1, 0, -11.0 / 4, -3.0 / 4, 7.0 / 4, 3.0 / 4};
  expect_coeffs(solve_constraint_system(InterpolatorKind::Hs5, w), expected);
  const auto c = hermite5_coeffs(w);
  expect_coeffs(c, expected);
  for (double r : constraint_residuals(InterpolatorKind::Hs5, c, w)) EXPECT_NEAR(r, 0.0, 1e-14);
}

TEST(SplineCore, Hermite3ClosedForm) {
  expect_coeffs(hermite3_coeffs({1, 1, 1, 1, 0, 0, 0, 0}), {1, 0, 0, 0});
  expect_coeffs(hermite3_coeffs({1, 0, -1, -2, 1, 1, 0, 0}), {0, 1, 0, 0});
  SampleWindow w;
  w.s_nm1 = 1.0;
  const auto c = hermite3_coeffs(w);
  expect_coeffs(c, {1, 0, -3, -2});
  expect_coeffs(solve_constraint_system(InterpolatorKind::Hs3, w), {1, 0, -3, -2});
}

TEST(SplineCore, Hermite3IgnoresOuterTaps) {
  SampleWindow a{0.3, -0.2, 0.5, 0.1, 0.4, -0.7, 0.9, 0.8};
  SampleWindow b = a;
  b.s_n = 17.0;
  b.s_nm3 = -4.0;
  b.d2_nm1 = 3.0;
  b.d2_nm2 = -9.0;
  const auto ca = hermite3_coeffs(a);
  const auto cb = hermite3_coeffs(b);
  for (int i = 0; i <= 3; ++i) EXPECT_EQ(ca[i], cb[i]);
}

TEST(SplineCore, Lagrange3IgnoresDerivatives) {
  SampleWindow a{0.3, -0.2, 0.5, 0.1, 0.0, 0.0, 0.0, 0.0};
  SampleWindow b{0.3, -0.2, 0.5, 0.1, 5.0, -6.0, 7.0, 8.0};
  const auto ca = lagrange3_coeffs(a);
  const auto cb = lagrange3_coeffs(b);
  for (int i = 0; i <= 3; ++i) EXPECT_EQ(ca[i], cb[i]);
}

TEST(SplineCore, Hermite5ClosedForm) {
  expect_coeffs(hermite5_coeffs({3, 3, 3, 3, 0, 0, 0, 0}), {3, 0, 0, 0, 0, 0});
  expect_coeffs(hermite5_coeffs({1, 0, -1, -2, 1, 1, 0, 0}), {0, 1, 0, 0, 0, 0});
}

TEST(SplineCore, Hermite7ClosedForm) {
  expect_coeffs(hermite7_coeffs({-2, -2, -2, -2, 0, 0, 0, 0}), {-2, 0, 0, 0, 0, 0, 0, 0});
  expect_coeffs(hermite7_coeffs({1, 0, -1, -2, 1, 1, 0, 0}), {0, 1, 0, 0, 0, 0, 0, 0});
  SampleWindow w;
  w.s_nm1 = 1.0;
  const std::vector<double> expected{1, 0, 0, 69.0 / 8, 33.0 / 4, -6, -37.0 / 4, -21.0 / 8};
  expect_coeffs(solve_constraint_system(InterpolatorKind::Hs7, w), expected, 1e-12);
  const auto c = hermite7_coeffs(w);
  expect_coeffs(c, expected, 1e-14);
  for (double r : constraint_residuals(InterpolatorKind::Hs7, c, w)) EXPECT_NEAR(r, 0.0, 1e-12);
}

TEST(SplineCore, Lagrange3ClosedForm) {
  expect_coeffs(lagrange3_coeffs({5, 5, 5, 5, 0, 0, 0, 0}), {5, 0, 0, 0});
  expect_coeffs(lagrange3_coeffs({1, 0, -1, -2, 0, 0, 0, 0}), {0, 1, 0, 0});
  // Node-0 Lagrange basis on {1, 0, -1, -2}: -(t - 1)(t + 1)(t + 2) / 2.
  SampleWindow w;
  w.s_nm1 = 1.0;
  const std::vector<double> expected{1, 0.5, -1, -0.5};
  expect_coeffs(solve_constraint_system(InterpolatorKind::Lp3, w), expected);
  const auto c = lagrange3_coeffs(w);
  expect_coeffs(c, expected);
  for (double r : constraint_residuals(InterpolatorKind::Lp3, c, w)) EXPECT_NEAR(r, 0.0, 1e-15);
}

TEST(SplineCore, ClosedFormMatchesSolve) {
  std::mt19937_64 rng(42);
  for (auto kind : kAllKinds) {
    for (int i = 0; i < 1000; ++i) {
      const SampleWindow w = random_window(rng);
      const auto fast = compute_coeffs(kind, w);
      const auto slow = solve_constraint_system(kind, w);
      for (int j = 0; j <= fast.order(); ++j) ASSERT_NEAR(fast[j], slow[j], 1e-12) << to_string(kind);
    }
  }
}

TEST(SplineCore, HornerExamples) {
  SplineCoefficients c(3);
  c[0] = 1;
  c[2] = -3;
  c[3] = -2;
  EXPECT_EQ(eval_horner(c, 0.0), 1.0);
  EXPECT_EQ(eval_horner(c, -1.0), 0.0);
  SplineCoefficients ramp(3);
  ramp[1] = 1;
  EXPECT_EQ(eval_horner(ramp, -0.5), -0.5);
}

TEST(SplineCore, PolynomialReproduction) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> ut(-1.0, 0.0);
  const std::pair<InterpolatorKind, int> cases[] = {
      {InterpolatorKind::Lp3, 3}, {InterpolatorKind::Hs3, 3}, {InterpolatorKind::Hs5, 5}, {InterpolatorKind::Hs7, 7}};
  for (auto [kind, degree] : cases) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> q(static_cast<std::size_t>(degree + 1));
      for (auto& v : q) v = u(rng);
      const auto c = compute_coeffs(kind, window_from_poly(q));
      for (int k = 0; k < 100; ++k) {
        const double t = ut(rng);
        const double want = poly_derivative(q, 0, t);
        EXPECT_NEAR(eval_horner(c, t), want, 1e-10 * std::max(1.0, std::abs(want)));
      }
    }
  }
}

TEST(SplineCore, Linearity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (auto kind : kAllKinds) {
    for (int i = 0; i < 200; ++i) {
      const SampleWindow a = random_window(rng), b = random_window(rng);
      const double alpha = u(rng), beta = u(rng);
      const SampleWindow mix{alpha * a.s_n + beta * b.s_n,       alpha * a.s_nm1 + beta * b.s_nm1,
                             alpha * a.s_nm2 + beta * b.s_nm2,   alpha * a.s_nm3 + beta * b.s_nm3,
                             alpha * a.d1_nm1 + beta * b.d1_nm1, alpha * a.d1_nm2 + beta * b.d1_nm2,
                             alpha * a.d2_nm1 + beta * b.d2_nm1, alpha * a.d2_nm2 + beta * b.d2_nm2};
      const auto ca = compute_coeffs(kind, a), cb = compute_coeffs(kind, b), cm = compute_coeffs(kind, mix);
      for (int j = 0; j <= cm.order(); ++j) EXPECT_NEAR(cm[j], alpha * ca[j] + beta * cb[j], 1e-12);
    }
  }
}

// Consecutive segments share knot values and derivative estimates, so value
// and slope (and curvature for Hs7) agree at the shared knot.
TEST(SplineCore, SegmentContinuity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> s(64), d1(64), d2(64);
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = u(rng);
    d1[i] = u(rng);
    d2[i] = u(rng);
  }
  const auto window_at = [&](std::size_t n) {  // s_n = s[n]
    return SampleWindow{s[n], s[n - 1], s[n - 2], s[n - 3], d1[n - 1], d1[n - 2], d2[n - 1], d2[n - 2]};
  };
  for (auto kind : {InterpolatorKind::Hs3, InterpolatorKind::Hs5, InterpolatorKind::Hs7}) {
    for (std::size_t n = 4; n < s.size(); ++n) {
      const auto older = compute_coeffs(kind, window_at(n - 1));
      const auto newer = compute_coeffs(kind, window_at(n));
      const int max_deriv = kind == InterpolatorKind::Hs7 ? 2 : 1;
      for (int k = 0; k <= max_deriv; ++k)
        EXPECT_NEAR(poly_derivative(older.a(), k, 0.0), poly_derivative(newer.a(), k, -1.0), 1e-10)
            << to_string(kind) << " derivative " << k;
    }
  }
}

TEST(SplineCore, ConstantMultiplierSets) {
  using R = Rational;
  EXPECT_EQ(constant_multiplier_set(InterpolatorKind::Hs3), (std::vector<R>{{2, 1}, {3, 1}}));
  const auto hs5 = constant_multiplier_set(InterpolatorKind::Hs5);
  EXPECT_EQ(hs5, (std::vector<R>{{1, 12}, {1, 4}, {1, 2}, {2, 1}, {3, 1}, {5, 1}, {11, 1}}));
  const auto hs7 = constant_multiplier_set(InterpolatorKind::Hs7);
  ASSERT_EQ(hs7.size(), 18u);
  const std::vector<double> listed{1.0 / 24, 1.0 / 8, 1.0 / 4, 1.0 / 2, 2,  3,  5,  6,   9,
                                   14,       15,      17,      18,      21, 35, 37, 207, 219};
  for (std::size_t i = 0; i < listed.size(); ++i) EXPECT_DOUBLE_EQ(hs7[i].value(), listed[i]);
  for (auto kind : kAllKinds) {
    const auto set = constant_multiplier_set(kind);
    for (std::size_t i = 1; i < set.size(); ++i) EXPECT_LT(set[i - 1].value(), set[i].value());
  }
}

}  // namespace
}  // namespace farrow
