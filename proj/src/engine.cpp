#include "farrow/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace farrow {

Ratio Ratio::normalized(std::uint64_t p, std::uint64_t q) {
  if (p == 0 || q == 0) throw std::invalid_argument("ratio terms must be positive");
  const std::uint64_t g = std::gcd(p, q);
  return {p / g, q / g};
}

DelayLine::DelayLine(std::size_t length) : buf_(std::max<std::size_t>(length, 1), 0.0) {}

void DelayLine::push(double x) {
  head_ = (head_ == 0 ? buf_.size() : head_) - 1;
  buf_[head_] = x;
}

double DelayLine::at(std::size_t k) const {
  std::size_t idx = head_ + k;
  if (idx >= buf_.size()) idx -= buf_.size();
  return buf_[idx];
}

namespace {

void check_mu(double mu) {
  if (!(mu >= 0.0 && mu < 1.0)) throw std::invalid_argument("fractional delay mu must lie in [0, 1)");
}

}  // namespace

FarrowResampler::FarrowResampler(const ResamplerConfig& cfg) : cfg_(cfg) {
  cfg_.ratio = Ratio::normalized(cfg.ratio.up, cfg.ratio.down);
  if (cfg_.mu) check_mu(*cfg_.mu);

  int d1_delay = 0;
  int d2_delay = 0;
  if (uses_first_derivative(cfg_.kind)) {
    auto f = design_differentiator({cfg_.diff_order, 1, cfg_.passband_edge});
    d1_delay = f.group_delay_D;
    d1_.emplace(DerivativePath{f, FirStream(f.taps), DelayLine(1)});
  }
  if (uses_second_derivative(cfg_.kind)) {
    if (cfg_.diff2_order <= 0)
      throw std::invalid_argument("hs7 requires a second-derivative filter (diff2_order)");
    auto f = design_differentiator({cfg_.diff2_order, 2, cfg_.passband_edge});
    d2_delay = f.group_delay_D;
    d2_.emplace(DerivativePath{f, FirStream(f.taps), DelayLine(1)});
  }
  delay_D_ = std::max(d1_delay, d2_delay);
  const auto D = static_cast<std::size_t>(delay_D_);
  if (d1_) d1_->align = DelayLine(D - static_cast<std::size_t>(d1_delay) + 3);
  if (d2_) d2_->align = DelayLine(D - static_cast<std::size_t>(d2_delay) + 3);
  signal_ = DelayLine(D + 4);
  exact_d1_ = DelayLine(D + 3);
  exact_d2_ = DelayLine(D + 3);

  if (cfg_.kind == InterpolatorKind::Lp3) {
    window_valid_at_ = 3;
  } else {
    const int span = cfg_.kind == InterpolatorKind::Hs3 ? 2 : 3;
    window_valid_at_ = std::max(delay_D_ + span, 2 * delay_D_ + 2);
  }
}

std::uint64_t FarrowResampler::first_valid_input() const {
  return static_cast<std::uint64_t>(window_valid_at_) + (cfg_.mu ? 1 : 0);
}

const DifferentiatorFilter* FarrowResampler::first_differentiator() const {
  return d1_ ? &d1_->filter : nullptr;
}

const DifferentiatorFilter* FarrowResampler::second_differentiator() const {
  return d2_ ? &d2_->filter : nullptr;
}

void FarrowResampler::set_ratio(std::uint64_t p, std::uint64_t q) {
  cfg_.ratio = Ratio::normalized(p, q);
  cfg_.mu.reset();
  phase_ = 0;
  wait_ = 0;
}

void FarrowResampler::set_fractional_delay(double mu) {
  check_mu(mu);
  cfg_.mu = mu;
}

SampleWindow FarrowResampler::window() const {
  const auto D = static_cast<std::size_t>(delay_D_);
  SampleWindow w;
  w.s_n = signal_.at(D);
  w.s_nm1 = signal_.at(D + 1);
  w.s_nm2 = signal_.at(D + 2);
  w.s_nm3 = signal_.at(D + 3);
  const auto node = [&](const DelayLine& line, std::size_t back) {
    return line.at(line.length() - 3 + back);
  };
  if (exact_mode_) {
    w.d1_nm1 = node(exact_d1_, 1);
    w.d1_nm2 = node(exact_d1_, 2);
    w.d2_nm1 = node(exact_d2_, 1);
    w.d2_nm2 = node(exact_d2_, 2);
    return w;
  }
  if (d1_) {
    w.d1_nm1 = node(d1_->align, 1);
    w.d1_nm2 = node(d1_->align, 2);
  }
  if (d2_) {
    w.d2_nm1 = node(d2_->align, 1);
    w.d2_nm2 = node(d2_->align, 2);
  }
  return w;
}

void FarrowResampler::advance(double x, std::optional<double> dx, std::optional<double> d2x) {
  signal_.push(x);
  exact_mode_ = dx.has_value();
  if (exact_mode_) {
    exact_d1_.push(*dx);
    exact_d2_.push(d2x.value_or(0.0));
  }
  // FIR state keeps running either way so the two modes stay interchangeable.
  if (d1_) d1_->align.push(d1_->fir.push(x));
  if (d2_) d2_->align.push(d2_->fir.push(x));
}

void FarrowResampler::emit(std::vector<OutputSample>& out) {
  const SampleWindow w = window();
  const SplineCoefficients current = compute_coeffs(cfg_.kind, w);
  const std::uint64_t n = pushed_;
  const bool window_ok = n >= static_cast<std::uint64_t>(window_valid_at_);

  if (cfg_.mu) {
    const double mu = *cfg_.mu;
    const double value = previous_ ? eval_horner(*previous_, -mu) : 0.0;
    out.push_back({value, !(previous_valid_ && previous_)});
    ++emitted_;
  } else if (wait_ > 0) {
    --wait_;
  } else {
    const std::uint64_t P = cfg_.ratio.up;
    const std::uint64_t Q = cfg_.ratio.down;
    for (;;) {
      // At t = -1 every kind interpolates s_{n-2} exactly.
      const double value =
          phase_ == 0 ? w.s_nm2
                      : eval_horner(current, (static_cast<double>(phase_) - static_cast<double>(P)) /
                                                 static_cast<double>(P));
      out.push_back({value, !window_ok});
      ++emitted_;
      phase_ += Q;
      const std::uint64_t carry = phase_ / P;
      phase_ %= P;
      if (carry > 0) {
        wait_ = carry - 1;
        break;
      }
    }
  }
  previous_ = current;
  previous_valid_ = window_ok;
}

void FarrowResampler::push(double x, std::vector<OutputSample>& out) {
  advance(x, std::nullopt, std::nullopt);
  emit(out);
  ++pushed_;
}

void FarrowResampler::push_exact(double x, double dx, double d2x, std::vector<OutputSample>& out) {
  advance(x, dx, d2x);
  emit(out);
  ++pushed_;
}

std::vector<OutputSample> FarrowResampler::process(std::span<const double> x) {
  std::vector<OutputSample> out;
  const auto P = static_cast<double>(cfg_.ratio.up);
  const auto Q = static_cast<double>(cfg_.ratio.down);
  out.reserve(cfg_.mu ? x.size() : static_cast<std::size_t>(std::ceil(static_cast<double>(x.size()) * P / Q)) + 1);
  for (double v : x) push(v, out);
  return out;
}

}  // namespace farrow
