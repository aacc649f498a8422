#include "farrow/spline_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace farrow {

std::string_view to_string(InterpolatorKind kind) {
  switch (kind) {
    case InterpolatorKind::Lp3: return "lp3";
    case InterpolatorKind::Hs3: return "hs3";
    case InterpolatorKind::Hs5: return "hs5";
    case InterpolatorKind::Hs7: return "hs7";
  }
  return "?";
}

InterpolatorKind parse_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "lp3") return InterpolatorKind::Lp3;
  if (lower == "hs3") return InterpolatorKind::Hs3;
  if (lower == "hs5") return InterpolatorKind::Hs5;
  if (lower == "hs7") return InterpolatorKind::Hs7;
  throw std::invalid_argument("unknown interpolator kind '" + std::string(name) + "'");
}

int polynomial_order(InterpolatorKind kind) {
  switch (kind) {
    case InterpolatorKind::Lp3:
    case InterpolatorKind::Hs3: return 3;
    case InterpolatorKind::Hs5: return 5;
    case InterpolatorKind::Hs7: return 7;
  }
  return 3;
}

bool uses_first_derivative(InterpolatorKind kind) { return kind != InterpolatorKind::Lp3; }
bool uses_second_derivative(InterpolatorKind kind) { return kind == InterpolatorKind::Hs7; }

SplineCoefficients::SplineCoefficients(int order) : order_(order) {
  if (order < 0 || order > kMaxOrder) throw std::invalid_argument("spline order out of range");
}

namespace {

constexpr int kMaxDim = SplineCoefficients::kMaxOrder + 1;

struct ConstraintSystem {
  int n = 0;
  std::array<std::array<double, kMaxDim>, kMaxDim> m{};
  std::array<double, kMaxDim> rhs{};

  // Row for the `deriv`-th derivative of p at t, equal to `value`.
  void add(int deriv, double t, double value) {
    auto& row = m[static_cast<std::size_t>(rows)];
    for (int j = 0; j < n; ++j) {
      if (j < deriv) {
        row[static_cast<std::size_t>(j)] = 0.0;
        continue;
      }
      double falling = 1.0;
      for (int k = 0; k < deriv; ++k) falling *= static_cast<double>(j - k);
      row[static_cast<std::size_t>(j)] = falling * std::pow(t, j - deriv);
    }
    rhs[static_cast<std::size_t>(rows)] = value;
    ++rows;
  }

  int rows = 0;
};

// Partial-pivot Gaussian elimination, in place.
void gauss_solve(ConstraintSystem& sys, std::span<double> x) {
  const int n = sys.n;
  auto& a = sys.m;
  auto& b = sys.rhs;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (a[pivot][col] == 0.0) throw std::runtime_error("singular constraint system");
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (int r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= a[r][c] * x[static_cast<std::size_t>(c)];
    x[static_cast<std::size_t>(r)] = acc / a[r][r];
  }
}

}  // namespace

SplineCoefficients solve_constraint_system(InterpolatorKind kind, const SampleWindow& w) {
  SplineCoefficients c(polynomial_order(kind));
  ConstraintSystem sys;
  sys.n = c.order() + 1;
  switch (kind) {
    case InterpolatorKind::Lp3:
      sys.add(0, 1.0, w.s_n);
      sys.add(0, 0.0, w.s_nm1);
      sys.add(0, -1.0, w.s_nm2);
      sys.add(0, -2.0, w.s_nm3);
      break;
    case InterpolatorKind::Hs3:
      sys.add(0, 0.0, w.s_nm1);
      sys.add(0, -1.0, w.s_nm2);
      sys.add(1, 0.0, w.d1_nm1);
      sys.add(1, -1.0, w.d1_nm2);
      break;
    case InterpolatorKind::Hs5:
    case InterpolatorKind::Hs7:
      sys.add(0, 1.0, w.s_n);
      sys.add(0, 0.0, w.s_nm1);
      sys.add(0, -1.0, w.s_nm2);
      sys.add(0, -2.0, w.s_nm3);
      sys.add(1, 0.0, w.d1_nm1);
      sys.add(1, -1.0, w.d1_nm2);
      if (kind == InterpolatorKind::Hs7) {
        sys.add(2, 0.0, w.d2_nm1);
        sys.add(2, -1.0, w.d2_nm2);
      }
      break;
  }
  gauss_solve(sys, c.a());
  return c;
}

SplineCoefficients lagrange3_coeffs(const SampleWindow& w) {
  SplineCoefficients c(3);
  c[0] = w.s_nm1;
  c[2] = 0.5 * (w.s_n + w.s_nm2) - c[0];
  c[3] = (1.0 / 6.0) * (c[0] - w.s_nm3 + w.s_nm2 - w.s_n + 4.0 * c[2]);
  c[1] = 0.5 * (w.s_n - w.s_nm2) - c[3];
  return c;
}

SplineCoefficients hermite3_coeffs(const SampleWindow& w) {
  SplineCoefficients c(3);
  const double ds = w.s_nm2 - w.s_nm1;
  c[0] = w.s_nm1;
  c[1] = w.d1_nm1;
  c[2] = 3.0 * ds + 2.0 * w.d1_nm1 + w.d1_nm2;
  c[3] = 2.0 * ds + w.d1_nm1 + w.d1_nm2;
  return c;
}

SplineCoefficients hermite5_coeffs(const SampleWindow& w) {
  constexpr double k1_12 = 1.0 / 12.0;
  constexpr double k1_4 = 0.25;
  constexpr double k1_2 = 0.5;
  SplineCoefficients c(5);
  c[0] = w.s_nm1;
  c[1] = w.d1_nm1;
  c[2] = k1_12 * (2.0 * w.s_n + w.s_nm3) + k1_2 * (5.0 * w.s_nm2 + 3.0 * c[1]) -
         k1_4 * (11.0 * c[0]) + w.d1_nm2;
  c[3] = k1_12 * (5.0 * w.s_n + w.s_nm3) - k1_4 * (3.0 * c[0] - w.s_nm2) -
         k1_2 * (c[1] - w.d1_nm2);
  c[4] = k1_2 * (w.s_n + w.s_nm2) - c[0] - c[2];
  c[5] = k1_2 * (w.s_n - w.s_nm2) - c[1] - c[3];
  return c;
}

SplineCoefficients hermite7_coeffs(const SampleWindow& w) {
  constexpr double k1_24 = 1.0 / 24.0;
  constexpr double k1_8 = 0.125;
  constexpr double k1_4 = 0.25;
  constexpr double k1_2 = 0.5;
  SplineCoefficients c(7);
  c[0] = w.s_nm1;
  c[1] = w.d1_nm1;
  c[2] = k1_2 * w.d2_nm1;
  c[3] = k1_24 * (207.0 * c[0] + w.s_nm3 + 2.0 * w.s_n) -
         k1_4 * (35.0 * w.s_nm2 + 21.0 * c[1] + 14.0 * w.d1_nm2 - 5.0 * w.d2_nm1 +
                 2.0 * w.d2_nm2);
  // a4 depends on a6.
  c[6] = k1_24 * (5.0 * w.s_n + 219.0 * w.s_nm2 - 2.0 * w.s_nm3) +
         k1_4 * (-37.0 * c[0] + 18.0 * c[1] + 17.0 * w.d1_nm2 + 3.0 * w.d2_nm2) - w.d2_nm1;
  c[4] = k1_2 * (w.s_n + w.s_nm2) - c[0] - c[2] - c[6];
  c[5] = k1_8 * (3.0 * (w.s_n + 15.0 * w.s_nm2)) - 6.0 * c[0] + 3.0 * c[1] +
         k1_4 * (9.0 * w.d1_nm2 + w.d2_nm2) - w.d2_nm1;
  c[7] = k1_24 * (w.s_n - w.s_nm3) - k1_8 * (21.0 * (c[0] - w.s_nm2)) +
         k1_4 * (5.0 * (c[1] + w.d1_nm2) - w.d2_nm1 + w.d2_nm2);
  return c;
}

SplineCoefficients compute_coeffs(InterpolatorKind kind, const SampleWindow& w) {
  switch (kind) {
    case InterpolatorKind::Lp3: return lagrange3_coeffs(w);
    case InterpolatorKind::Hs3: return hermite3_coeffs(w);
    case InterpolatorKind::Hs5: return hermite5_coeffs(w);
    case InterpolatorKind::Hs7: return hermite7_coeffs(w);
  }
  throw std::invalid_argument("bad interpolator kind");
}

std::vector<Rational> constant_multiplier_set(InterpolatorKind kind) {
  switch (kind) {
    case InterpolatorKind::Lp3: return {{1, 6}, {1, 2}, {4, 1}};
    case InterpolatorKind::Hs3: return {{2, 1}, {3, 1}};
    case InterpolatorKind::Hs5: return {{1, 12}, {1, 4}, {1, 2}, {2, 1}, {3, 1}, {5, 1}, {11, 1}};
    case InterpolatorKind::Hs7:
      return {{1, 24}, {1, 8},  {1, 4},  {1, 2},  {2, 1},  {3, 1},   {5, 1},   {6, 1},   {9, 1},
              {14, 1}, {15, 1}, {17, 1}, {18, 1}, {21, 1}, {35, 1}, {37, 1}, {207, 1}, {219, 1}};
  }
  return {};
}

}  // namespace farrow
