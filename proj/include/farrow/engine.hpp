#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "farrow/diff_design.hpp"
#include "farrow/spline_core.hpp"

namespace farrow {

// P/Q: P output samples per Q input samples. Always stored coprime.
struct Ratio {
  std::uint64_t up = 1;    // P
  std::uint64_t down = 1;  // Q

  static Ratio normalized(std::uint64_t p, std::uint64_t q);  // throws on zero
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

struct ResamplerConfig {
  InterpolatorKind kind = InterpolatorKind::Hs3;
  int diff_order = 32;    // first-derivative FIR order (Hermite kinds)
  int diff2_order = 0;    // second-derivative FIR order, required for Hs7
  double passband_edge = 0.8;
  Ratio ratio{};
  std::optional<double> mu;  // set: fixed fractional delay, one output per input
};

struct OutputSample {
  double value = 0.0;
  bool transient = false;  // computed from zero-filled start-up state
};

// Fixed-capacity delay line; at(k) is the sample pushed k steps ago.
class DelayLine {
 public:
  explicit DelayLine(std::size_t length = 1);

  void push(double x);
  double at(std::size_t k) const;
  std::size_t length() const { return buf_.size(); }

 private:
  std::vector<double> buf_;
  std::size_t head_ = 0;
};

// Streaming Farrow resampler. The signal path is delayed by D = N_FIR/2 to
// line up with the differentiator outputs; the current segment spans input
// times [n - L, n - L + 1) with latency L = D + 2.
//
// Ratio mode emits outputs at positions phase/P past the older knot
// (t = phase/P - 1). Fractional-delay mode emits one output per input equal
// to x(n - L - mu), evaluated on the previous segment at t = -mu.
class FarrowResampler {
 public:
  explicit FarrowResampler(const ResamplerConfig& cfg);

  void push(double x, std::vector<OutputSample>& out);
  std::vector<OutputSample> process(std::span<const double> x);

  // Test hook: bypasses the differentiators and feeds exact derivative
  // values of x at this input's time; they run through the same alignment.
  void push_exact(double x, double dx, double d2x, std::vector<OutputSample>& out);

  void set_ratio(std::uint64_t p, std::uint64_t q);
  void set_fractional_delay(double mu);

  const ResamplerConfig& config() const { return cfg_; }
  Ratio ratio() const { return cfg_.ratio; }
  std::optional<double> fractional_delay() const { return cfg_.mu; }
  int differentiator_delay() const { return delay_D_; }
  int latency() const { return delay_D_ + 2; }
  // Index of the first input push whose output is not transient.
  std::uint64_t first_valid_input() const;
  std::uint64_t phase() const { return phase_; }
  std::uint64_t inputs_consumed() const { return pushed_; }
  std::uint64_t outputs_emitted() const { return emitted_; }

  const DifferentiatorFilter* first_differentiator() const;
  const DifferentiatorFilter* second_differentiator() const;

 private:
  struct DerivativePath {
    DifferentiatorFilter filter;
    FirStream fir;
    DelayLine align;   // extra delay D - D_i, plus two nodes of history
  };

  void advance(double x, std::optional<double> dx, std::optional<double> d2x);
  void emit(std::vector<OutputSample>& out);
  SampleWindow window() const;

  ResamplerConfig cfg_;
  int delay_D_ = 0;
  int window_valid_at_ = 0;

  DelayLine signal_;
  std::optional<DerivativePath> d1_;
  std::optional<DerivativePath> d2_;
  DelayLine exact_d1_;
  DelayLine exact_d2_;
  bool exact_mode_ = false;

  std::optional<SplineCoefficients> previous_;
  bool previous_valid_ = false;

  std::uint64_t phase_ = 0;  // next output at phase_/P past the older knot
  std::uint64_t wait_ = 0;   // segments to skip before the next output
  std::uint64_t pushed_ = 0;
  std::uint64_t emitted_ = 0;
};

}  // namespace farrow
