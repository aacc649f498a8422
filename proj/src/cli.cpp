#include "farrow/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "farrow/analysis.hpp"
#include "farrow/diff_design.hpp"
#include "farrow/engine.hpp"
#include "farrow/signal_io.hpp"
#include "farrow/spline_core.hpp"

namespace farrow::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kExitCodes =
    "Exit codes: 0 ok, 1 internal error, 2 usage error (unknown flag, missing argument),\n"
    "  3 bad --ratio syntax, 4 invalid option value, 5 unreadable input or unwritable output,\n"
    "  6 malformed or mismatched file contents.";

struct Failure {
  ExitCode code;
  std::string message;
};

[[noreturn]] void fail(ExitCode code, std::string message) { throw Failure{code, std::move(message)}; }

struct EngineOptions {
  std::string kind = "hs3";
  int diff_order = 32;
  int diff2_order = 0;  // 0: same as diff_order
  double passband = 0.8;
};

void add_engine_options(CLI::App* cmd, EngineOptions& o) {
  cmd->add_option("--kind", o.kind, "Interpolator: lp3, hs3, hs5, hs7")->capture_default_str();
  cmd->add_option("--diff-order", o.diff_order, "First-derivative FIR order (even)")->capture_default_str();
  cmd->add_option("--diff2-order", o.diff2_order, "Second-derivative FIR order for hs7 (default: --diff-order)");
  cmd->add_option("--passband", o.passband, "Differentiator passband edge, fraction of Nyquist")
      ->capture_default_str();
}

ResamplerConfig to_config(const EngineOptions& o) {
  ResamplerConfig cfg;
  try {
    cfg.kind = parse_kind(o.kind);
  } catch (const std::invalid_argument& e) {
    fail(kBadConfig, e.what());
  }
  cfg.diff_order = o.diff_order;
  cfg.diff2_order = o.diff2_order > 0 ? o.diff2_order : o.diff_order;
  cfg.passband_edge = o.passband;
  return cfg;
}

std::optional<SignalFormat> to_format(const std::string& name) {
  if (name.empty()) return std::nullopt;
  try {
    return parse_format(name);
  } catch (const std::invalid_argument& e) {
    fail(kBadConfig, e.what());
  }
}

Ratio parse_ratio(const std::string& text) {
  const auto slash = text.find('/');
  const auto parse_part = [&](std::string_view part) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size() || v == 0)
      fail(kBadRatio, "--ratio must look like P/Q with positive integers, got '" + text + "'");
    return v;
  };
  if (slash == std::string::npos) fail(kBadRatio, "--ratio must look like P/Q, got '" + text + "'");
  const std::string_view sv(text);
  return Ratio::normalized(parse_part(sv.substr(0, slash)), parse_part(sv.substr(slash + 1)));
}

Signal load(const std::string& path, const std::string& format) {
  const auto fmt = to_format(format);
  try {
    return read_signal(path, fmt);
  } catch (const SignalIoError& e) {
    fail(e.kind() == SignalIoError::Kind::Unreadable ? kIoFailure : kBadFormat, e.what());
  }
}

void store(const Signal& sig, const std::string& path, const std::string& format) {
  const SignalFormat fmt = to_format(format).value_or(format_from_extension(path));
  try {
    write_signal(sig, path, fmt);
  } catch (const SignalIoError& e) {
    fail(kIoFailure, e.what());
  }
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(kIoFailure, "cannot create " + path);
  f << text;
  if (!f) fail(kIoFailure, "write error on " + path);
}

FarrowResampler make_engine(const ResamplerConfig& cfg) {
  try {
    return FarrowResampler(cfg);
  } catch (const std::invalid_argument& e) {
    fail(kBadConfig, e.what());
  }
}

// ---------------------------------------------------------------- coeffs

struct CoeffsOptions {
  std::string kind = "hs3";
  std::vector<std::string> windows;
  std::string in;
  std::string out;
  bool solve = false;
};

SampleWindow parse_window(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t\r");
    const auto last = item.find_last_not_of(" \t\r");
    if (first == std::string::npos) fail(kBadConfig, "empty field in window '" + text + "'");
    const std::string_view field(item.data() + first, last - first + 1);
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), x);
    if (ec != std::errc{} || ptr != field.data() + field.size())
      fail(kBadConfig, "bad number in window '" + text + "'");
    v.push_back(x);
  }
  if (v.size() < 4 || v.size() > 8)
    fail(kBadConfig, "window needs 4..8 values: s_n,s_n-1,s_n-2,s_n-3[,d1_n-1,d1_n-2[,d2_n-1,d2_n-2]]");
  v.resize(8, 0.0);
  return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
}

int run_coeffs(const CoeffsOptions& o, std::ostream& out) {
  InterpolatorKind kind{};
  try {
    kind = parse_kind(o.kind);
  } catch (const std::invalid_argument& e) {
    fail(kBadConfig, e.what());
  }
  std::vector<std::string> rows = o.windows;
  if (!o.in.empty()) {
    std::ifstream f(o.in);
    if (!f) fail(kIoFailure, "cannot open " + o.in);
    std::string line;
    while (std::getline(f, line))
      if (line.find_first_not_of(" \t\r") != std::string::npos) rows.push_back(line);
  }
  if (rows.empty()) fail(kUsage, "coeffs needs --window or --in");
  std::string text;
  for (const auto& r : rows) {
    const SampleWindow w = parse_window(r);
    const SplineCoefficients c = o.solve ? solve_constraint_system(kind, w) : compute_coeffs(kind, w);
    for (int i = 0; i <= c.order(); ++i) {
      if (i) text += ',';
      text += format_double(c[i]);
    }
    text += '\n';
  }
  write_text(o.out, text, out);
  return kOk;
}

// ----------------------------------------------------------- design-diff

struct DesignOptions {
  int order = 32;
  int degree = 1;
  double passband = 0.8;
  std::string out;
};

int run_design(const DesignOptions& o, std::ostream& out) {
  DifferentiatorFilter f;
  try {
    f = design_differentiator({o.order, o.degree, o.passband});
  } catch (const std::invalid_argument& e) {
    fail(kBadConfig, e.what());
  }
  write_text(o.out, encode_csv(f.taps), out);
  return kOk;
}

// ------------------------------------------------------ delay / resample

struct StreamOptions {
  EngineOptions engine;
  double mu = 0.0;
  std::string ratio;
  bool keep_transient = false;
  std::string in_format;
  std::string out_format;
  std::string in;
  std::string out;
};

int run_stream(const StreamOptions& o, bool delay_mode) {
  ResamplerConfig cfg = to_config(o.engine);
  if (delay_mode) {
    if (!(o.mu >= 0.0 && o.mu < 1.0)) fail(kBadConfig, "--mu must lie in [0, 1)");
    cfg.mu = o.mu;
  } else {
    cfg.ratio = parse_ratio(o.ratio);
  }
  to_format(o.out_format);
  FarrowResampler engine = make_engine(cfg);
  const Signal input = load(o.in, o.in_format);

  Signal output;
  output.sample_rate = input.sample_rate * static_cast<double>(cfg.ratio.up) / static_cast<double>(cfg.ratio.down);
  for (const auto& s : engine.process(input.samples))
    if (o.keep_transient || !s.transient) output.samples.push_back(s.value);
  store(output, o.out, o.out_format);
  return kOk;
}

// --------------------------------------------------------------- analyze

struct AnalyzeOptions {
  EngineOptions engine;
  int oversample = 8;
  std::size_t nfft = 1 << 16;
  bool impulse = false;
  std::optional<double> mu;
  double band = 0.8;
  std::optional<double> mainlobe_edge;
  std::string out;
};

std::string spectrum_csv(const SpectrumAnalysis& s) {
  std::string text = "freq_fd,mag_db,group_delay\n";
  for (std::size_t i = 0; i < s.freq_fd.size(); ++i) {
    text += format_double(s.freq_fd[i]) + ',' + format_double(s.magnitude_db[i]) + ',' +
            format_double(s.group_delay[i]) + '\n';
  }
  return text;
}

std::string impulse_csv(const ImpulseResponse& h) {
  std::string text = "t,h\n";
  for (std::size_t j = 0; j < h.samples.size(); ++j) {
    const double t = (static_cast<double>(j) - static_cast<double>(h.origin)) / h.oversample;
    text += format_double(t) + ',' + format_double(h.samples[j]) + '\n';
  }
  return text;
}

int run_analyze(const AnalyzeOptions& o, std::ostream& out) {
  const ResamplerConfig cfg = to_config(o.engine);
  if (o.oversample < 2) fail(kBadConfig, "--oversample must be >= 2");
  if (!(o.band > 0.0 && o.band <= 1.0)) fail(kBadConfig, "--band must lie in (0, 1]");
  make_engine(cfg);

  if (o.mu) {
    if (!(*o.mu >= 0.0 && *o.mu < 1.0)) fail(kBadConfig, "--mu must lie in [0, 1)");
    const auto grid = default_delay_grid();
    const auto tau = group_delay(cfg, *o.mu, grid);
    write_text(o.out, spectrum_csv(tau), out);
    return kOk;
  }

  const ImpulseResponse h = impulse_response(cfg, o.oversample);
  if (o.impulse) {
    write_text(o.out, impulse_csv(h), out);
    return kOk;
  }
  SpectrumAnalysis s;
  try {
    s = frequency_response(h, o.nfft);
  } catch (const std::invalid_argument& e) {
    fail(kBadConfig, e.what());
  }
  write_text(o.out, spectrum_csv(s), out);
  if (!o.out.empty() && o.out != "-") {
    out << "kind=" << to_string(cfg.kind) << " sidelobe_db=" << format_double(sidelobe_level(s, o.mainlobe_edge))
        << " image_suppression_db=" << format_double(image_suppression(s, o.band, o.oversample)) << '\n';
  }
  return kOk;
}

// ----------------------------------------------------------------- bench

struct BenchOptions {
  std::string out_dir;
  int diff_order = 32;
  int gd_order = 48;
  int oversample = 8;
  int impulse_oversample = 64;
  double tol = 0.01;
};

struct KindReport {
  InterpolatorKind kind;
  ImpulseResponse impulse;
  SpectrumAnalysis spectrum;
  double sidelobe_db = 0.0;
  double image_db = 0.0;
};

int run_bench(const BenchOptions& o, std::ostream& out) {
  fs::path dir = o.out_dir;
  if (dir.empty()) {
    const char* env = std::getenv("FARROW_OUT_DIR");
    dir = env && *env ? fs::path(env) : fs::path(".");
  }
  if (o.oversample < 2 || o.impulse_oversample < 8) fail(kBadConfig, "oversample factors too small");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(kIoFailure, "cannot create " + dir.string());

  constexpr InterpolatorKind kKinds[] = {InterpolatorKind::Lp3, InterpolatorKind::Hs3, InterpolatorKind::Hs5,
                                         InterpolatorKind::Hs7};
  constexpr double kMus[] = {0.0, 0.1, 0.25, 0.5, 0.75, 0.9};

  std::vector<std::future<KindReport>> jobs;
  for (auto kind : kKinds) {
    jobs.push_back(std::async(std::launch::async, [&, kind] {
      KindReport r{kind, impulse_response(kind, o.diff_order, o.impulse_oversample), {}, 0.0, 0.0};
      r.spectrum = frequency_response(impulse_response(kind, o.diff_order, o.oversample), 1 << 16);
      r.sidelobe_db = sidelobe_level(r.spectrum);
      r.image_db = image_suppression(r.spectrum, 0.8, o.oversample);
      return r;
    }));
  }
  const auto grid = default_delay_grid();
  std::map<std::pair<int, double>, std::future<SpectrumAnalysis>> delays;
  for (auto kind : {InterpolatorKind::Lp3, InterpolatorKind::Hs3})
    for (double mu : kMus)
      delays[{static_cast<int>(kind), mu}] =
          std::async(std::launch::async, [&, kind, mu] { return group_delay(kind, o.gd_order, mu, grid); });

  std::vector<KindReport> reports;
  for (auto& j : jobs) reports.push_back(j.get());

  std::string impulse = "kind,t,h\n";
  for (const auto& r : reports) {
    const auto& h = r.impulse;
    for (std::size_t j = 0; j < h.samples.size(); ++j) {
      const double t = (static_cast<double>(j) - static_cast<double>(h.origin)) / h.oversample;
      impulse += std::string(to_string(r.kind)) + ',' + format_double(t) + ',' + format_double(h.samples[j]) + '\n';
    }
  }
  std::string freq = "freq_fd,lp3,hs3,hs5,hs7\n";
  for (std::size_t i = 0; i < reports.front().spectrum.freq_fd.size(); ++i) {
    freq += format_double(reports.front().spectrum.freq_fd[i]);
    for (const auto& r : reports) freq += ',' + format_double(r.spectrum.magnitude_db[i]);
    freq += '\n';
  }
  std::string gd = "freq_fd";
  std::vector<SpectrumAnalysis> taus;
  std::map<int, double> min_band;
  for (auto& [key, fut] : delays) {
    gd += ',' + std::string(to_string(static_cast<InterpolatorKind>(key.first))) + "_mu" + format_double(key.second);
    taus.push_back(fut.get());
    if (key.second > 0.0) {
      const double band = flat_band(taus.back(), o.tol);
      auto [it, fresh] = min_band.emplace(key.first, band);
      if (!fresh) it->second = std::min(it->second, band);
    }
  }
  gd += '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) {
    gd += format_double(grid[i]);
    for (const auto& t : taus) gd += ',' + format_double(t.group_delay[i]);
    gd += '\n';
  }
  std::string summary = "kind,sidelobe_db,image_suppression_db,flat_band_fd\n";
  for (const auto& r : reports) {
    const auto it = min_band.find(static_cast<int>(r.kind));
    summary += std::string(to_string(r.kind)) + ',' + format_double(r.sidelobe_db) + ',' + format_double(r.image_db) +
               ',' + (it == min_band.end() ? std::string() : format_double(it->second)) + '\n';
  }

  write_text((dir / "impulse.csv").string(), impulse, out);
  write_text((dir / "frequency.csv").string(), freq, out);
  write_text((dir / "group_delay.csv").string(), gd, out);
  write_text((dir / "summary.csv").string(), summary, out);
  out << summary;
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Farrow-structure resampler built on Lagrange and Hermite-spline interpolation", "farrow"};
  app.footer(kExitCodes);
  app.require_subcommand(1);

  CoeffsOptions co;
  auto* coeffs = app.add_subcommand("coeffs", "Segment polynomial coefficients as CSV rows a0,...,aN");
  coeffs->add_option("--kind", co.kind, "lp3, hs3, hs5, hs7")->capture_default_str();
  coeffs->add_option("--window", co.windows, "s_n,s_n-1,s_n-2,s_n-3[,d1_n-1,d1_n-2[,d2_n-1,d2_n-2]]")
      ->allow_extra_args(false);
  coeffs->add_option("--in", co.in, "File with one window per line");
  coeffs->add_option("--out", co.out, "Output CSV (default stdout)");
  coeffs->add_flag("--solve", co.solve, "Use the dense constraint solve instead of the closed form");

  DesignOptions dopt;
  auto* design = app.add_subcommand("design-diff", "Design a linear-phase FIR differentiator; one tap per line");
  design->add_option("--order", dopt.order, "Even FIR order >= 8")->capture_default_str();
  design->add_option("--degree", dopt.degree, "Derivative degree, 1 or 2")->capture_default_str();
  design->add_option("--passband", dopt.passband, "Passband edge, fraction of Nyquist")->capture_default_str();
  design->add_option("--out", dopt.out, "Output CSV (default stdout)");

  StreamOptions dl;
  auto* delay = app.add_subcommand("delay", "Fixed fractional delay: y[n] = x(n - L - mu)");
  add_engine_options(delay, dl.engine);
  delay->add_option("--mu", dl.mu, "Fractional delay in [0, 1)")->required();
  StreamOptions rs;
  auto* resample = app.add_subcommand("resample", "Rational P/Q sample-rate conversion");
  add_engine_options(resample, rs.engine);
  resample->add_option("--ratio", rs.ratio, "P/Q: P outputs per Q inputs")->required();
  for (auto [cmd, o] : {std::pair{delay, &dl}, std::pair{resample, &rs}}) {
    cmd->add_flag("--keep-transient", o->keep_transient, "Keep start-up outputs");
    cmd->add_option("--in-format", o->in_format, "raw-f64le, wav-pcm16, wav-float32, csv (default: by extension)");
    cmd->add_option("--out-format", o->out_format, "raw-f64le, wav-pcm16, wav-float32, csv (default: by extension)");
    cmd->add_option("input", o->in, "Input signal file")->required();
    cmd->add_option("output", o->out, "Output signal file")->required();
  }

  AnalyzeOptions an;
  auto* analyze = app.add_subcommand("analyze", "Frequency response, impulse response or group delay as CSV");
  add_engine_options(analyze, an.engine);
  analyze->add_option("--oversample", an.oversample, "Interpolation factor P")->capture_default_str();
  analyze->add_option("--nfft", an.nfft, "FFT length (power of two)")->capture_default_str();
  analyze->add_flag("--impulse", an.impulse, "Emit t,h rows of the impulse response");
  analyze->add_option("--mu", an.mu, "Emit the group delay of the fractional-delay system instead");
  analyze->add_option("--band", an.band, "Processing band for image suppression, fraction of F_d")
      ->capture_default_str();
  analyze->add_option("--mainlobe-edge", an.mainlobe_edge, "Sidelobe search start in F_d (default: first null)");
  analyze->add_option("--out", an.out, "Output CSV (default stdout)");

  BenchOptions bo;
  auto* bench = app.add_subcommand("bench", "Full Lp3/Hs3/Hs5/Hs7 comparison; writes one CSV per comparison");
  bench->add_option("--out-dir", bo.out_dir, "Output directory (default $FARROW_OUT_DIR or .)");
  bench->add_option("--diff-order", bo.diff_order, "Differentiator order for the frequency comparison")
      ->capture_default_str();
  bench->add_option("--gd-order", bo.gd_order, "Differentiator order for the group delay comparison")
      ->capture_default_str();
  bench->add_option("--oversample", bo.oversample, "Interpolation factor for the spectra")->capture_default_str();
  bench->add_option("--tol", bo.tol, "Group delay flatness tolerance in samples")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "farrow: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*coeffs) return run_coeffs(co, out);
    if (*design) return run_design(dopt, out);
    if (*delay) return run_stream(dl, true);
    if (*resample) return run_stream(rs, false);
    if (*analyze) return run_analyze(an, out);
    if (*bench) return run_bench(bo, out);
  } catch (const Failure& f) {
    err << "farrow: " << f.message << '\n';
    return f.code;
  } catch (const std::invalid_argument& e) {
    err << "farrow: " << e.what() << '\n';
    return kBadConfig;
  } catch (const std::exception& e) {
    err << "farrow: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

}  // namespace farrow::cli
