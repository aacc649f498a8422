#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace farrow {

enum class InterpolatorKind { Lp3, Hs3, Hs5, Hs7 };

std::string_view to_string(InterpolatorKind kind);
InterpolatorKind parse_kind(std::string_view name);  // throws std::invalid_argument
int polynomial_order(InterpolatorKind kind);
bool uses_first_derivative(InterpolatorKind kind);
bool uses_second_derivative(InterpolatorKind kind);

// Four signal taps plus derivative estimates at the two inner knots.
// The segment spans t in [-1, 0]: s_nm1 sits at t = 0, s_nm2 at t = -1,
// s_n at t = 1 and s_nm3 at t = -2.
struct SampleWindow {
  double s_n = 0.0;
  double s_nm1 = 0.0;
  double s_nm2 = 0.0;
  double s_nm3 = 0.0;
  double d1_nm1 = 0.0;
  double d1_nm2 = 0.0;
  double d2_nm1 = 0.0;
  double d2_nm2 = 0.0;
};

class SplineCoefficients {
 public:
  static constexpr int kMaxOrder = 7;

  explicit SplineCoefficients(int order);

  int order() const { return order_; }
  std::span<const double> a() const { return {a_.data(), static_cast<std::size_t>(order_ + 1)}; }
  std::span<double> a() { return {a_.data(), static_cast<std::size_t>(order_ + 1)}; }
  double operator[](int i) const { return a_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return a_[static_cast<std::size_t>(i)]; }

 private:
  int order_;
  std::array<double, kMaxOrder + 1> a_{};
};

struct Rational {
  std::int64_t num;
  std::int64_t den;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

// Solves the kind's interpolation constraints (values and derivative
// matches) by dense Gaussian elimination. Slow but independent of the
// closed forms; use it as the reference.
SplineCoefficients solve_constraint_system(InterpolatorKind kind, const SampleWindow& w);

SplineCoefficients lagrange3_coeffs(const SampleWindow& w);
SplineCoefficients hermite3_coeffs(const SampleWindow& w);
SplineCoefficients hermite5_coeffs(const SampleWindow& w);
SplineCoefficients hermite7_coeffs(const SampleWindow& w);

// Closed-form dispatch.
SplineCoefficients compute_coeffs(InterpolatorKind kind, const SampleWindow& w);

/// Horner evaluation a_0 + t(a_1 + t(a_2 + ...)), exactly order() multiplies by t.
inline double eval_horner(const SplineCoefficients& c, double t) {
  const auto a = c.a();
  double acc = a.back();
  for (int i = c.order() - 1; i >= 0; --i) acc = acc * t + a[static_cast<std::size_t>(i)];
  return acc;
}

/// Distinct constant multipliers used by the closed-form path of `kind`,
/// sorted ascending.
std::vector<Rational> constant_multiplier_set(InterpolatorKind kind);

}  // namespace farrow
