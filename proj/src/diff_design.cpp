#include "farrow/diff_design.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace farrow {

namespace {

constexpr int kGridPerTap = 64;
constexpr int kMinGrid = 2048;

}  // namespace

DifferentiatorFilter design_differentiator(const DifferentiatorSpec& spec) {
  if (spec.order < 8 || spec.order % 2 != 0)
    throw std::invalid_argument("differentiator order must be even and >= 8");
  if (spec.deriv_degree != 1 && spec.deriv_degree != 2)
    throw std::invalid_argument("differentiator degree must be 1 or 2");
  if (!(spec.passband_edge > 0.0 && spec.passband_edge < 1.0))
    throw std::invalid_argument("passband edge must lie in (0, 1)");

  const int half = spec.order / 2;
  const int grid = std::max(kMinGrid, kGridPerTap * spec.order);
  const double top = spec.passband_edge * std::numbers::pi;

  // Degree 1: A(w) = 2 sum c_k sin(kw). Degree 2: A(w) = 2 sum c_k (cos(kw) - 1),
  // which pins A(0) = 0 so the taps sum to zero.
  Eigen::MatrixXd basis(grid, half);
  Eigen::VectorXd ideal(grid);
  for (int i = 0; i < grid; ++i) {
    const double w = top * static_cast<double>(i) / static_cast<double>(grid - 1);
    for (int k = 1; k <= half; ++k) {
      const double kw = static_cast<double>(k) * w;
      basis(i, k - 1) = spec.deriv_degree == 1 ? 2.0 * std::sin(kw) : 2.0 * (std::cos(kw) - 1.0);
    }
    ideal(i) = spec.deriv_degree == 1 ? w : -w * w;
  }
  // Pin the low-frequency behaviour exactly: A'(0) = 1 (degree 1) or
  // A''(0) = -2 (degree 2), i.e. sum g_k c_k = 1. Eliminate c_1.
  Eigen::VectorXd g(half);
  for (int k = 1; k <= half; ++k)
    g(k - 1) = spec.deriv_degree == 1 ? 2.0 * k : static_cast<double>(k) * k;
  Eigen::VectorXd c(half);
  if (half == 1) {
    c(0) = 1.0 / g(0);
  } else {
    Eigen::MatrixXd reduced(grid, half - 1);
    for (int k = 1; k < half; ++k) reduced.col(k - 1) = basis.col(k) - (g(k) / g(0)) * basis.col(0);
    const Eigen::VectorXd target = ideal - basis.col(0) / g(0);
    const Eigen::VectorXd rest = reduced.colPivHouseholderQr().solve(target);
    c.tail(half - 1) = rest;
    c(0) = (1.0 - g.tail(half - 1).dot(rest)) / g(0);
  }

  DifferentiatorFilter f;
  f.deriv_degree = spec.deriv_degree;
  f.group_delay_D = half;
  f.taps.assign(static_cast<std::size_t>(spec.order + 1), 0.0);
  double side_sum = 0.0;
  for (int k = 1; k <= half; ++k) {
    const double ck = c(k - 1);
    const auto lo = static_cast<std::size_t>(half - k);
    const auto hi = static_cast<std::size_t>(half + k);
    if (spec.deriv_degree == 1) {
      f.taps[lo] = ck;
      f.taps[hi] = -ck;
    } else {
      f.taps[lo] = ck;
      f.taps[hi] = ck;
      side_sum += 2.0 * ck;
    }
  }
  if (spec.deriv_degree == 2) f.taps[static_cast<std::size_t>(half)] = -side_sum;
  return f;
}

int group_delay_of(const DifferentiatorFilter& f) { return f.group_delay_D; }

double zero_phase_amplitude(const DifferentiatorFilter& f, double omega) {
  const int half = f.group_delay_D;
  const auto tap = [&](int i) { return f.taps[static_cast<std::size_t>(i)]; };
  double acc = f.deriv_degree == 1 ? 0.0 : tap(half);
  for (int k = 1; k <= half; ++k) {
    const double kw = static_cast<double>(k) * omega;
    acc += f.deriv_degree == 1 ? 2.0 * tap(half - k) * std::sin(kw) : 2.0 * tap(half - k) * std::cos(kw);
  }
  return acc;
}

FirStream::FirStream(std::vector<double> taps)
    : taps_(std::move(taps)), history_(taps_.size(), 0.0) {}

double FirStream::push(double x) {
  if (taps_.empty()) return 0.0;
  const std::size_t n = taps_.size();
  head_ = (head_ == 0 ? n : head_) - 1;
  history_[head_] = x;
  double acc = 0.0;
  // history_[head_ + k] holds x[n - k]
  std::size_t idx = head_;
  for (std::size_t k = 0; k < n; ++k) {
    acc += taps_[k] * history_[idx];
    if (++idx == n) idx = 0;
  }
  return acc;
}

void FirStream::reset() {
  std::fill(history_.begin(), history_.end(), 0.0);
  head_ = 0;
}

std::vector<double> apply_fir(const DifferentiatorFilter& f, std::span<const double> x) {
  FirStream stream(f.taps);
  std::vector<double> y;
  y.reserve(x.size());
  for (double v : x) y.push_back(stream.push(v));
  return y;
}

}  // namespace farrow
