#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "farrow/engine.hpp"

namespace farrow {

// Equivalent impulse response of an interpolate-by-P resampler. samples[j]
// belongs to time (j - origin) / P input samples relative to the impulse;
// origin = L * P, so the pipeline latency is removed from the time axis.
struct ImpulseResponse {
  std::vector<double> samples;
  int oversample = 1;
  std::size_t origin = 0;
  int differentiator_delay = 0;  // D of the generating engine
};

struct SpectrumAnalysis {
  std::vector<double> freq_fd;       // units of the input rate F_d
  std::vector<double> magnitude_db;  // 0 dB at DC, floored at -kSentinelDb
  std::vector<double> group_delay;   // input samples, D removed
};

inline constexpr double kSentinelDb = 300.0;

ImpulseResponse impulse_response(const ResamplerConfig& base, int oversample);
ImpulseResponse impulse_response(InterpolatorKind kind, int diff_order, int oversample);

// Bins 0..nfft/2 of the zero-padded real FFT of x.
std::vector<std::complex<double>> real_fft(std::span<const double> x, std::size_t nfft);

// Zero-padded FFT of h; the grid covers 0..P/2 F_d. nfft must be a power of
// two no smaller than the response.
SpectrumAnalysis frequency_response(const ImpulseResponse& h, std::size_t nfft);

// Default 4096-point grid strictly inside (0, 0.5) F_d.
std::vector<double> default_delay_grid(std::size_t points = 4096);

// Group delay of the fixed fractional-delay system (one output per input),
// probed by an impulse. Result is tau(f) - D, so an ideal system reads 2 + mu.
SpectrumAnalysis group_delay(const ResamplerConfig& base, double mu, std::span<const double> grid);
SpectrumAnalysis group_delay(InterpolatorKind kind, int diff_order, double mu,
                             std::span<const double> grid);

// Group delay of an arbitrary FIR at the given frequencies (cycles/sample),
// from phase differences between neighbouring grid points.
std::vector<double> fir_group_delay(std::span<const double> h, std::span<const double> freq);

// Mainlobe edge: first local minimum after the response drops below -6 dB.
double detect_mainlobe_edge(const SpectrumAnalysis& s);
double sidelobe_level(const SpectrumAnalysis& s, std::optional<double> mainlobe_edge = std::nullopt);

// Minimum over f in [0, band/2] F_d of level(f) minus the strongest image at
// k F_d +- f, k = 1..P-1. Capped at kSentinelDb.
double image_suppression(const SpectrumAnalysis& s, double band, int oversample);

// Largest grid frequency up to which |tau - median(tau over f <= 0.05)| <= tol.
double flat_band(const SpectrumAnalysis& tau, double tol);

// Largest jump of the derivative-th derivative of h across knots (input-sample
// time units). Each block of P samples is one polynomial segment of the given
// degree; both sides are recovered by least-squares fits.
double knot_discontinuity(const ImpulseResponse& h, int derivative, int poly_degree);

}  // namespace farrow
