#pragma once

#include <span>
#include <vector>

namespace farrow {

struct DifferentiatorSpec {
  int order = 32;             // N_FIR, even
  int deriv_degree = 1;       // 1 or 2
  double passband_edge = 0.8; // fraction of Nyquist
};

// Linear-phase FIR approximating d/dn (antisymmetric taps) or d^2/dn^2
// (symmetric taps, zero tap sum). Group delay is order/2 samples.
struct DifferentiatorFilter {
  std::vector<double> taps;
  int deriv_degree = 1;
  int group_delay_D = 0;

  int order() const { return static_cast<int>(taps.size()) - 1; }
};

// Least-squares fit of the zero-phase amplitude to w (degree 1) or -w^2
// (degree 2) on a dense grid over [0, passband_edge * pi]; the rest of the
// band is unweighted. The DC slope (degree 1) or curvature (degree 2) is
// constrained to the ideal value. Throws std::invalid_argument on odd order, order < 8,
// degree outside {1, 2} or passband_edge outside (0, 1).
DifferentiatorFilter design_differentiator(const DifferentiatorSpec& spec);

int group_delay_of(const DifferentiatorFilter& f);

// Zero-phase amplitude A(w): H(e^jw) = e^{-jwD} * (j A(w)) for degree 1 and
// e^{-jwD} * A(w) for degree 2. Ideal values are w and -w^2.
double zero_phase_amplitude(const DifferentiatorFilter& f, double omega);

// Direct-form FIR with zero initial state; one output per input.
class FirStream {
 public:
  FirStream() = default;
  explicit FirStream(std::vector<double> taps);

  double push(double x);
  void reset();

 private:
  std::vector<double> taps_;
  std::vector<double> history_;  // circular, newest at head_
  std::size_t head_ = 0;
};

std::vector<double> apply_fir(const DifferentiatorFilter& f, std::span<const double> x);

}  // namespace farrow
