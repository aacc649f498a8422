#include "farrow/analysis.hpp"

#include <fftw3.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace farrow {

namespace {

using Complex = std::complex<double>;

double to_db(double ratio) {
  const double floor = std::pow(10.0, -kSentinelDb / 20.0);
  return 20.0 * std::log10(std::max(ratio, floor));
}

// tau at each point from arg(H[i+1] conj(H[i])) over the neighbouring
// interval; interior points average the two adjacent intervals.
std::vector<double> delay_from_phasors(std::span<const Complex> H, std::span<const double> omega) {
  const std::size_t n = H.size();
  std::vector<double> tau(n, 0.0);
  if (n < 2) return tau;
  std::vector<double> mid(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double dphi = std::arg(H[i + 1] * std::conj(H[i]));
    mid[i] = -dphi / (omega[i + 1] - omega[i]);
  }
  tau[0] = mid.front();
  tau[n - 1] = mid.back();
  for (std::size_t i = 1; i + 1 < n; ++i) tau[i] = 0.5 * (mid[i - 1] + mid[i]);
  return tau;
}

std::vector<Complex> dtft(std::span<const double> h, std::span<const double> freq) {
  std::vector<Complex> H(freq.size());
  for (std::size_t i = 0; i < freq.size(); ++i) {
    const double w = 2.0 * std::numbers::pi * freq[i];
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < h.size(); ++k) acc += h[k] * std::polar(1.0, -w * static_cast<double>(k));
    H[i] = acc;
  }
  return H;
}

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

double interp_db(const SpectrumAnalysis& s, double f) {
  const auto& x = s.freq_fd;
  const auto it = std::lower_bound(x.begin(), x.end(), f);
  if (it == x.begin()) return s.magnitude_db.front();
  if (it == x.end()) return s.magnitude_db.back();
  const auto hi = static_cast<std::size_t>(it - x.begin());
  const std::size_t lo = hi - 1;
  const double frac = (f - x[lo]) / (x[hi] - x[lo]);
  return s.magnitude_db[lo] + frac * (s.magnitude_db[hi] - s.magnitude_db[lo]);
}

}  // namespace

ImpulseResponse impulse_response(const ResamplerConfig& base, int oversample) {
  if (oversample < 2) throw std::invalid_argument("impulse response needs oversample >= 2");
  ResamplerConfig cfg = base;
  cfg.mu.reset();
  cfg.ratio = {static_cast<std::uint64_t>(oversample), 1};
  FarrowResampler engine(cfg);

  const int D = engine.differentiator_delay();
  const int pushes = 2 * D + 4;
  std::vector<OutputSample> out;
  out.reserve(static_cast<std::size_t>(pushes * oversample));
  for (int n = 0; n < pushes; ++n) engine.push(n == 0 ? 1.0 : 0.0, out);

  ImpulseResponse h;
  h.oversample = oversample;
  h.origin = static_cast<std::size_t>(engine.latency()) * static_cast<std::size_t>(oversample);
  h.differentiator_delay = D;
  h.samples.reserve(out.size());
  for (const auto& o : out) h.samples.push_back(o.value);
  return h;
}

ImpulseResponse impulse_response(InterpolatorKind kind, int diff_order, int oversample) {
  ResamplerConfig cfg;
  cfg.kind = kind;
  cfg.diff_order = diff_order;
  cfg.diff2_order = diff_order;
  return impulse_response(cfg, oversample);
}

std::vector<Complex> real_fft(std::span<const double> x, std::size_t nfft) {
  if (nfft == 0 || nfft < x.size()) throw std::invalid_argument("nfft smaller than the input");
  const std::size_t bins = nfft / 2 + 1;
  std::unique_ptr<double, decltype(&fftw_free)> in(fftw_alloc_real(nfft), &fftw_free);
  std::unique_ptr<fftw_complex, decltype(&fftw_free)> spec(fftw_alloc_complex(bins), &fftw_free);
  std::fill(in.get(), in.get() + nfft, 0.0);
  std::copy(x.begin(), x.end(), in.get());
  // Planner calls are not thread-safe; execution is.
  fftw_plan plan;
  {
    const std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(nfft), in.get(), spec.get(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::vector<Complex> out(bins);
  for (std::size_t k = 0; k < bins; ++k) out[k] = {spec.get()[k][0], spec.get()[k][1]};
  {
    const std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

SpectrumAnalysis frequency_response(const ImpulseResponse& h, std::size_t nfft) {
  if (!is_power_of_two(nfft)) throw std::invalid_argument("nfft must be a power of two");
  if (nfft < h.samples.size()) throw std::invalid_argument("nfft smaller than the impulse response");

  const std::size_t bins = nfft / 2 + 1;
  const std::vector<Complex> H = real_fft(h.samples, nfft);
  std::vector<double> omega(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    omega[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(nfft);
  }
  const double dc = std::abs(H[0]);
  if (dc == 0.0) throw std::invalid_argument("impulse response has zero DC gain");

  SpectrumAnalysis s;
  s.freq_fd.resize(bins);
  s.magnitude_db.resize(bins);
  const auto tau = delay_from_phasors(H, omega);
  s.group_delay.resize(bins);
  const double P = static_cast<double>(h.oversample);
  for (std::size_t k = 0; k < bins; ++k) {
    s.freq_fd[k] = static_cast<double>(k) * P / static_cast<double>(nfft);
    s.magnitude_db[k] = to_db(std::abs(H[k]) / dc);
    s.group_delay[k] = tau[k] / P - static_cast<double>(h.differentiator_delay);
  }
  return s;
}

std::vector<double> default_delay_grid(std::size_t points) {
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = 0.5 * (static_cast<double>(i) + 0.5) / static_cast<double>(points);
  return grid;
}

std::vector<double> fir_group_delay(std::span<const double> h, std::span<const double> freq) {
  const auto H = dtft(h, freq);
  std::vector<double> omega(freq.size());
  for (std::size_t i = 0; i < freq.size(); ++i) omega[i] = 2.0 * std::numbers::pi * freq[i];
  return delay_from_phasors(H, omega);
}

SpectrumAnalysis group_delay(const ResamplerConfig& base, double mu, std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("empty frequency grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] < 0.5))
      throw std::invalid_argument("group delay grid must lie strictly inside (0, 0.5) F_d");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("grid must be increasing");
  }
  ResamplerConfig cfg = base;
  cfg.ratio = {1, 1};
  cfg.mu = mu;
  FarrowResampler engine(cfg);

  const int pushes = 2 * engine.differentiator_delay() + 6;
  std::vector<OutputSample> out;
  for (int n = 0; n < pushes; ++n) engine.push(n == 0 ? 1.0 : 0.0, out);
  std::vector<double> h;
  h.reserve(out.size());
  for (const auto& o : out) h.push_back(o.value);

  const auto H = dtft(h, grid);
  std::vector<double> omega(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) omega[i] = 2.0 * std::numbers::pi * grid[i];
  const auto tau = delay_from_phasors(H, omega);
  const double dc = std::abs(std::accumulate(h.begin(), h.end(), 0.0));

  SpectrumAnalysis s;
  s.freq_fd.assign(grid.begin(), grid.end());
  s.magnitude_db.resize(grid.size());
  s.group_delay.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    s.magnitude_db[i] = to_db(std::abs(H[i]) / dc);
    s.group_delay[i] = tau[i] - static_cast<double>(engine.differentiator_delay());
  }
  return s;
}

SpectrumAnalysis group_delay(InterpolatorKind kind, int diff_order, double mu,
                             std::span<const double> grid) {
  ResamplerConfig cfg;
  cfg.kind = kind;
  cfg.diff_order = diff_order;
  cfg.diff2_order = diff_order;
  return group_delay(cfg, mu, grid);
}

double detect_mainlobe_edge(const SpectrumAnalysis& s) {
  const auto& m = s.magnitude_db;
  std::size_t i = 0;
  while (i < m.size() && m[i] >= -6.0) ++i;
  if (i == m.size()) throw std::invalid_argument("response never leaves its mainlobe");
  while (i + 1 < m.size() && m[i + 1] < m[i]) ++i;
  return s.freq_fd[i];
}

double sidelobe_level(const SpectrumAnalysis& s, std::optional<double> mainlobe_edge) {
  const double edge = mainlobe_edge ? *mainlobe_edge : detect_mainlobe_edge(s);
  const auto it = std::lower_bound(s.freq_fd.begin(), s.freq_fd.end(), edge);
  if (it == s.freq_fd.end()) throw std::invalid_argument("no spectrum beyond the mainlobe edge");
  const auto first = s.magnitude_db.begin() + (it - s.freq_fd.begin());
  return *std::max_element(first, s.magnitude_db.end());
}

double image_suppression(const SpectrumAnalysis& s, double band, int oversample) {
  if (oversample < 2) throw std::invalid_argument("image suppression needs oversample >= 2");
  if (!(band > 0.0 && band <= 1.0))
    throw std::invalid_argument("processing band must lie in (0, 1] F_d");
  const double top = s.freq_fd.back();
  double worst = kSentinelDb;
  bool any = false;
  for (std::size_t i = 0; i < s.freq_fd.size(); ++i) {
    const double f = s.freq_fd[i];
    if (f > 0.5 * band) break;
    any = true;
    double image = -std::numeric_limits<double>::infinity();
    for (int k = 1; k < oversample; ++k) {
      for (double img : {k - f, k + f}) {
        if (img <= top) image = std::max(image, interp_db(s, img));
      }
    }
    if (std::isfinite(image)) worst = std::min(worst, s.magnitude_db[i] - image);
  }
  if (!any) throw std::invalid_argument("processing band contains no grid points");
  return std::min(worst, kSentinelDb);
}

double flat_band(const SpectrumAnalysis& tau, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("flatness tolerance must be positive");
  const auto& f = tau.freq_fd;
  const auto& t = tau.group_delay;
  if (f.empty()) throw std::invalid_argument("empty group delay");
  std::vector<double> low;
  for (std::size_t i = 0; i < f.size() && (f[i] <= 0.05 || low.empty()); ++i) low.push_back(t[i]);
  std::nth_element(low.begin(), low.begin() + static_cast<std::ptrdiff_t>(low.size() / 2), low.end());
  double ref = low[low.size() / 2];
  if (low.size() % 2 == 0) {
    const double below = *std::max_element(low.begin(), low.begin() + static_cast<std::ptrdiff_t>(low.size() / 2));
    ref = 0.5 * (ref + below);
  }
  std::size_t last = 0;
  bool any = false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::abs(t[i] - ref) > tol) break;
    last = i;
    any = true;
  }
  return any ? f[last] : f.front();
}

double knot_discontinuity(const ImpulseResponse& h, int derivative, int poly_degree) {
  const int P = h.oversample;
  if (derivative < 0 || poly_degree < 0 || P < poly_degree + 1)
    throw std::invalid_argument("segment fit needs oversample > polynomial degree");
  if (h.samples.size() % static_cast<std::size_t>(P) != 0)
    throw std::invalid_argument("impulse response is not block aligned");
  const std::size_t blocks = h.samples.size() / static_cast<std::size_t>(P);
  const int terms = poly_degree + 1;

  Eigen::MatrixXd vander(P, terms);
  for (int k = 0; k < P; ++k) {
    const double t = -1.0 + static_cast<double>(k) / P;
    double pw = 1.0;
    for (int j = 0; j < terms; ++j, pw *= t) vander(k, j) = pw;
  }
  const auto qr = vander.colPivHouseholderQr();

  const auto deriv_at = [&](const Eigen::VectorXd& a, double t) {
    double acc = 0.0;
    for (int j = derivative; j < terms; ++j) {
      double falling = 1.0;
      for (int k = 0; k < derivative; ++k) falling *= j - k;
      acc += falling * a(j) * std::pow(t, j - derivative);
    }
    return acc;
  };

  // left/right derivative at every block boundary, zero outside the response
  std::vector<double> at_start(blocks), at_end(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    Eigen::VectorXd y(P);
    for (int k = 0; k < P; ++k) y(k) = h.samples[b * static_cast<std::size_t>(P) + static_cast<std::size_t>(k)];
    const Eigen::VectorXd a = qr.solve(y);
    at_start[b] = deriv_at(a, -1.0);
    at_end[b] = deriv_at(a, 0.0);
  }
  double worst = std::max(std::abs(at_start.front()), std::abs(at_end.back()));
  for (std::size_t b = 0; b + 1 < blocks; ++b) worst = std::max(worst, std::abs(at_end[b] - at_start[b + 1]));
  return worst;
}

}  // namespace farrow
