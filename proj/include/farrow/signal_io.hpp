#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace farrow {

enum class SignalFormat { RawF64, WavPcm16, WavFloat32, Csv };

std::string_view to_string(SignalFormat f);
SignalFormat parse_format(std::string_view name);  // "raw-f64le", "wav-pcm16", "wav-float32", "csv"
// By extension: .wav -> wav-float32, .csv/.txt -> csv, anything else raw-f64le.
SignalFormat format_from_extension(const std::filesystem::path& p);

class SignalIoError : public std::runtime_error {
 public:
  enum class Kind { Unreadable, Unwritable, Truncated, Malformed, FormatMismatch };

  SignalIoError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct Signal {
  std::vector<double> samples;
  double sample_rate = 0.0;  // informational; 0 when unknown
};

// Mono only. When `format` is empty the extension decides; for WAV files the
// header then selects pcm16 or float32.
Signal read_signal(const std::filesystem::path& path, std::optional<SignalFormat> format = std::nullopt);
void write_signal(const Signal& signal, const std::filesystem::path& path, SignalFormat format);

// In-memory codecs used by the file functions.
std::vector<double> decode_raw_f64le(std::span<const unsigned char> bytes);
std::vector<unsigned char> encode_raw_f64le(std::span<const double> samples);
Signal decode_wav(std::span<const unsigned char> bytes, std::optional<SignalFormat> expect);
std::vector<unsigned char> encode_wav(const Signal& signal, SignalFormat format);
std::vector<double> decode_csv(std::string_view text);
std::string encode_csv(std::span<const double> samples);

// Shortest text that parses back to the same double.
std::string format_double(double v);

}  // namespace farrow
