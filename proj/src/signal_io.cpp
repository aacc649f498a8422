#include "farrow/signal_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

namespace farrow {

namespace {

using Bytes = std::vector<unsigned char>;

constexpr std::uint16_t kWavPcm = 1;
constexpr std::uint16_t kWavFloat = 3;
constexpr std::uint16_t kWavExtensible = 0xFFFE;

std::uint32_t read_le(std::span<const unsigned char> b, std::size_t at, int width) {
  std::uint32_t v = 0;
  for (int i = width - 1; i >= 0; --i) v = (v << 8) | b[at + static_cast<std::size_t>(i)];
  return v;
}

void put_le(Bytes& out, std::uint64_t v, int width) {
  for (int i = 0; i < width; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
}

void put_tag(Bytes& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

bool tag_is(std::span<const unsigned char> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

Bytes slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SignalIoError(SignalIoError::Kind::Unreadable, "cannot open " + path.string());
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw SignalIoError(SignalIoError::Kind::Unreadable, "read error on " + path.string());
  return data;
}

}  // namespace

std::string_view to_string(SignalFormat f) {
  switch (f) {
    case SignalFormat::RawF64: return "raw-f64le";
    case SignalFormat::WavPcm16: return "wav-pcm16";
    case SignalFormat::WavFloat32: return "wav-float32";
    case SignalFormat::Csv: return "csv";
  }
  return "?";
}

SignalFormat parse_format(std::string_view name) {
  if (name == "raw-f64le" || name == "raw" || name == "f64") return SignalFormat::RawF64;
  if (name == "wav-pcm16") return SignalFormat::WavPcm16;
  if (name == "wav-float32") return SignalFormat::WavFloat32;
  if (name == "csv") return SignalFormat::Csv;
  throw std::invalid_argument("unknown signal format '" + std::string(name) + "'");
}

SignalFormat format_from_extension(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".wav") return SignalFormat::WavFloat32;
  if (ext == ".csv" || ext == ".txt") return SignalFormat::Csv;
  return SignalFormat::RawF64;
}

std::vector<double> decode_raw_f64le(std::span<const unsigned char> bytes) {
  if (bytes.size() % 8 != 0)
    throw SignalIoError(SignalIoError::Kind::Truncated, "raw-f64le length is not a multiple of 8 bytes");
  std::vector<double> out(bytes.size() / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t v = 0;
    for (int b = 7; b >= 0; --b) v = (v << 8) | bytes[8 * i + static_cast<std::size_t>(b)];
    out[i] = std::bit_cast<double>(v);
  }
  return out;
}

std::vector<unsigned char> encode_raw_f64le(std::span<const double> samples) {
  Bytes out;
  out.reserve(samples.size() * 8);
  for (double s : samples) put_le(out, std::bit_cast<std::uint64_t>(s), 8);
  return out;
}

Signal decode_wav(std::span<const unsigned char> b, std::optional<SignalFormat> expect) {
  using K = SignalIoError::Kind;
  if (b.size() < 12 || !tag_is(b, 0, "RIFF") || !tag_is(b, 8, "WAVE"))
    throw SignalIoError(K::FormatMismatch, "not a RIFF/WAVE file");

  std::optional<std::uint16_t> encoding;
  std::uint16_t channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= b.size()) {
    const std::uint32_t size = read_le(b, pos + 4, 4);
    const std::size_t body = pos + 8;
    if (tag_is(b, pos, "fmt ")) {
      if (size < 16 || body + size > b.size()) throw SignalIoError(K::Malformed, "bad fmt chunk");
      encoding = static_cast<std::uint16_t>(read_le(b, body, 2));
      channels = static_cast<std::uint16_t>(read_le(b, body + 2, 2));
      rate = read_le(b, body + 4, 4);
      bits = static_cast<std::uint16_t>(read_le(b, body + 14, 2));
      if (*encoding == kWavExtensible) {
        if (size < 40) throw SignalIoError(K::Malformed, "short extensible fmt chunk");
        encoding = static_cast<std::uint16_t>(read_le(b, body + 24, 2));
      }
    } else if (tag_is(b, pos, "data")) {
      if (!encoding) throw SignalIoError(K::Malformed, "data chunk before fmt chunk");
      if (channels != 1) throw SignalIoError(K::FormatMismatch, "only mono WAV files are supported");
      SignalFormat found;
      if (*encoding == kWavPcm && bits == 16) found = SignalFormat::WavPcm16;
      else if (*encoding == kWavFloat && bits == 32) found = SignalFormat::WavFloat32;
      else throw SignalIoError(K::FormatMismatch, "unsupported WAV encoding");
      if (expect && *expect != found)
        throw SignalIoError(K::FormatMismatch, "WAV file is " + std::string(to_string(found)) +
                                                   ", expected " + std::string(to_string(*expect)));
      if (body + size > b.size()) throw SignalIoError(K::Truncated, "WAV data chunk is truncated");
      const std::size_t width = bits / 8;
      if (size % width != 0) throw SignalIoError(K::Malformed, "WAV data size is not a whole sample count");
      Signal sig;
      sig.sample_rate = rate;
      sig.samples.resize(size / width);
      for (std::size_t i = 0; i < sig.samples.size(); ++i) {
        const std::uint32_t raw = read_le(b, body + i * width, static_cast<int>(width));
        if (found == SignalFormat::WavPcm16)
          sig.samples[i] = static_cast<double>(static_cast<std::int16_t>(raw)) / 32768.0;
        else
          sig.samples[i] = std::bit_cast<float>(raw);
      }
      return sig;
    }
    pos = body + size + (size & 1);
  }
  throw SignalIoError(K::Malformed, "WAV file has no data chunk");
}

std::vector<unsigned char> encode_wav(const Signal& signal, SignalFormat format) {
  if (format != SignalFormat::WavPcm16 && format != SignalFormat::WavFloat32)
    throw std::invalid_argument("encode_wav needs a WAV format");
  const bool pcm = format == SignalFormat::WavPcm16;
  const std::uint32_t width = pcm ? 2 : 4;
  const auto data_size = static_cast<std::uint32_t>(signal.samples.size() * width);
  const auto rate = static_cast<std::uint32_t>(signal.sample_rate > 0 ? std::lround(signal.sample_rate) : 48000);

  Bytes out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put_le(out, 36 + data_size, 4);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_le(out, 16, 4);
  put_le(out, pcm ? kWavPcm : kWavFloat, 2);
  put_le(out, 1, 2);
  put_le(out, rate, 4);
  put_le(out, rate * width, 4);
  put_le(out, width, 2);
  put_le(out, width * 8, 2);
  put_tag(out, "data");
  put_le(out, data_size, 4);
  for (double s : signal.samples) {
    if (pcm) {
      const double scaled = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
      put_le(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)), 2);
    } else {
      put_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(s)), 4);
    }
  }
  return out;
}

std::vector<double> decode_csv(std::string_view text) {
  std::vector<double> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (line.empty()) continue;
    if (line.front() == '+') line.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc{} || ptr != line.data() + line.size())
      throw SignalIoError(SignalIoError::Kind::Malformed,
                          "csv line " + std::to_string(line_no) + " is not a single number");
    out.push_back(v);
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string encode_csv(std::span<const double> samples) {
  std::string out;
  out.reserve(samples.size() * 20);
  for (double s : samples) {
    out += format_double(s);
    out += '\n';
  }
  return out;
}

Signal read_signal(const std::filesystem::path& path, std::optional<SignalFormat> format) {
  const Bytes data = slurp(path);
  const SignalFormat f = format.value_or(format_from_extension(path));
  switch (f) {
    case SignalFormat::RawF64: return {decode_raw_f64le(data), 0.0};
    case SignalFormat::Csv:
      return {decode_csv(std::string_view(reinterpret_cast<const char*>(data.data()), data.size())), 0.0};
    case SignalFormat::WavPcm16:
    case SignalFormat::WavFloat32: return decode_wav(data, format);
  }
  throw std::invalid_argument("bad signal format");
}

void write_signal(const Signal& signal, const std::filesystem::path& path, SignalFormat format) {
  Bytes bytes;
  switch (format) {
    case SignalFormat::RawF64: bytes = encode_raw_f64le(signal.samples); break;
    case SignalFormat::Csv: {
      const auto text = encode_csv(signal.samples);
      bytes.assign(text.begin(), text.end());
      break;
    }
    case SignalFormat::WavPcm16:
    case SignalFormat::WavFloat32: bytes = encode_wav(signal, format); break;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SignalIoError(SignalIoError::Kind::Unwritable, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw SignalIoError(SignalIoError::Kind::Unwritable, "write error on " + path.string());
}

}  // namespace farrow
