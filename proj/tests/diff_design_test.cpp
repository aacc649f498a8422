#include "farrow/diff_design.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

namespace farrow {
namespace {

constexpr double kPi = std::numbers::pi;

// Passband error measured straight from the taps (DTFT), independent of
// zero_phase_amplitude.
double max_relative_error(const DifferentiatorFilter& f, double edge) {
  double worst = 0.0;
  for (int i = 0; i < 1024; ++i) {
    const double w = 0.02 * kPi + (edge - 0.02) * kPi * i / 1023.0;
    std::complex<double> H{};
    for (std::size_t k = 0; k < f.taps.size(); ++k) H += f.taps[k] * std::polar(1.0, -w * static_cast<double>(k));
    H *= std::polar(1.0, w * f.group_delay_D);  // remove the linear phase
    const double ideal = f.deriv_degree == 1 ? w : w * w;
    const double amp = f.deriv_degree == 1 ? H.imag() : -H.real();
    worst = std::max(worst, std::abs(amp - ideal) / ideal);
  }
  return worst;
}

TEST(DiffDesign, RejectsBadSpecs) {
  EXPECT_THROW(design_differentiator({31, 1, 0.8}), std::invalid_argument);
  EXPECT_THROW(design_differentiator({6, 1, 0.8}), std::invalid_argument);
  EXPECT_THROW(design_differentiator({32, 3, 0.8}), std::invalid_argument);
  EXPECT_THROW(design_differentiator({32, 1, 0.0}), std::invalid_argument);
  EXPECT_THROW(design_differentiator({32, 1, 1.0}), std::invalid_argument);
}

TEST(DiffDesign, GroupDelay) {
  EXPECT_EQ(group_delay_of(design_differentiator({32, 1, 0.8})), 16);
  EXPECT_EQ(group_delay_of(design_differentiator({48, 2, 0.8})), 24);
  EXPECT_EQ(group_delay_of(design_differentiator({8, 1, 0.8})), 4);
}

TEST(DiffDesign, SymmetryIsExact) {
  for (int order : {8, 16, 32, 48, 64}) {
    const auto f1 = design_differentiator({order, 1, 0.8});
    const auto f2 = design_differentiator({order, 2, 0.8});
    ASSERT_EQ(f1.taps.size(), static_cast<std::size_t>(order + 1));
    for (int k = 0; k <= order; ++k) {
      EXPECT_EQ(f1.taps[k], -f1.taps[order - k]);
      EXPECT_EQ(f2.taps[k], f2.taps[order - k]);
    }
    EXPECT_EQ(f1.taps[order / 2], 0.0);
    EXPECT_NEAR(std::accumulate(f2.taps.begin(), f2.taps.end(), 0.0), 0.0, 1e-12);
    EXPECT_EQ(zero_phase_amplitude(f1, 0.0), 0.0);
  }
}

TEST(DiffDesign, AmplitudeExamples) {
  const auto f1 = design_differentiator({32, 1, 0.8});
  EXPECT_NEAR(zero_phase_amplitude(f1, 0.2 * kPi), 0.6283, 1e-3);
  const auto f2 = design_differentiator({48, 2, 0.8});
  EXPECT_NEAR(-zero_phase_amplitude(f2, 0.2 * kPi), 0.3948, 1e-3);
}

TEST(DiffDesign, PassbandFidelity) {
  EXPECT_LE(max_relative_error(design_differentiator({32, 1, 0.8}), 0.8), 1e-3);
  EXPECT_LE(max_relative_error(design_differentiator({48, 2, 0.8}), 0.8), 1e-3);
  EXPECT_LE(max_relative_error(design_differentiator({32, 2, 0.8}), 0.8), 1e-3);
  EXPECT_LE(max_relative_error(design_differentiator({48, 2, 0.9}), 0.9), 1e-3);
}

TEST(DiffDesign, LinearPhase) {
  for (auto [order, degree] : {std::pair{32, 1}, std::pair{48, 2}}) {
    const auto f = design_differentiator({order, degree, 0.8});
    for (int i = 1; i <= 100; ++i) {
      const double w = 0.8 * kPi * i / 100.0;
      std::complex<double> H{};
      for (std::size_t k = 0; k < f.taps.size(); ++k) H += f.taps[k] * std::polar(1.0, -w * static_cast<double>(k));
      const double deg = std::arg(H * std::polar(1.0, w * f.group_delay_D)) * 180.0 / kPi;
      if (degree == 1) EXPECT_NEAR(deg, 90.0, 0.5);
      else EXPECT_NEAR(std::abs(deg), 180.0, 0.5);
    }
  }
}

TEST(DiffDesign, DoublingOrderNeverHurts) {
  for (int degree : {1, 2}) {
    double previous = 1e300;
    for (int order : {8, 16, 32, 64}) {
      const double err = max_relative_error(design_differentiator({order, degree, 0.8}), 0.8);
      EXPECT_LE(err, previous) << "order " << order << " degree " << degree;
      previous = err;
    }
  }
}

TEST(ApplyFir, ZeroStream) {
  const auto f = design_differentiator({16, 1, 0.8});
  for (double y : apply_fir(f, std::vector<double>(100, 0.0))) EXPECT_EQ(y, 0.0);
}

TEST(ApplyFir, RampSlope) {
  const auto f = design_differentiator({32, 1, 0.8});
  std::vector<double> x(200);
  std::iota(x.begin(), x.end(), 0.0);
  const auto y = apply_fir(f, x);
  // Oracle: steady-state response to n is -sum k h[k].
  double moment = 0.0;
  for (std::size_t k = 0; k < f.taps.size(); ++k) moment -= static_cast<double>(k) * f.taps[k];
  for (std::size_t n = 32; n < y.size(); ++n) {
    EXPECT_NEAR(y[n], 1.0, 1e-6);
    EXPECT_NEAR(y[n], moment, 1e-9);
  }
}

TEST(ApplyFir, ToneGainAndQuadrature) {
  const auto f = design_differentiator({32, 1, 0.8});
  const double fr = 0.05;
  std::vector<double> x(400);
  for (std::size_t n = 0; n < x.size(); ++n) x[n] = std::sin(2 * kPi * fr * static_cast<double>(n));
  const auto y = apply_fir(f, x);
  // Ideal: 2 pi f cos(2 pi f (n - D)).
  const double gain = 2 * kPi * fr;
  for (std::size_t n = 32; n < y.size(); ++n) {
    const double ideal = gain * std::cos(2 * kPi * fr * (static_cast<double>(n) - 16.0));
    EXPECT_NEAR(y[n], ideal, 1e-3);
  }
}

TEST(FirStream, MatchesDirectConvolution) {
  const std::vector<double> taps{0.5, -1.0, 0.25, 2.0};
  FirStream s(taps);
  const std::vector<double> x{1, 2, 3, 4, 5, 6};
  for (std::size_t n = 0; n < x.size(); ++n) {
    double want = 0.0;
    for (std::size_t k = 0; k < taps.size() && k <= n; ++k) want += taps[k] * x[n - k];
    EXPECT_DOUBLE_EQ(s.push(x[n]), want);
  }
  s.reset();
  EXPECT_DOUBLE_EQ(s.push(1.0), 0.5);
}

}  // namespace
}  // namespace farrow
