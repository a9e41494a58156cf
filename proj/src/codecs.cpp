#include "permx/codecs.hpp"

#include <cctype>
#include <string>
#include <string_view>

#include "permx/error.hpp"

namespace permx {

namespace {

[[noreturn]] void format_error(const std::string& what) {
  throw Error(ErrorKind::format, what);
}

}  // namespace

BitStream bytes_to_bits(std::span<const std::uint8_t> bytes) {
  return BitStream::from_bytes(bytes);
}

std::vector<std::uint8_t> bits_to_bytes(const BitStream& bits) {
  if (!bits.byte_aligned())
    format_error("bit stream of " + std::to_string(bits.size()) +
                 " bits is not a whole number of bytes");
  const auto p = bits.packed();
  return {p.begin(), p.end()};
}

void RasterImage::validate() const {
  if (channels != 3 && channels != 4)
    format_error("images must have 3 (RGB) or 4 (RGBA) channels");
  if (samples.size() != std::uint64_t{width} * height * channels)
    format_error("sample count does not match image dimensions");
}

BitStream image_to_bits(const RasterImage& image) {
  image.validate();
  return BitStream::from_bytes(image.samples);
}

RasterImage bits_to_image(const BitStream& bits, std::uint32_t width,
                          std::uint32_t height, std::uint8_t channels) {
  const std::uint64_t expected = std::uint64_t{width} * height * channels * 8;
  if (bits.size() != expected)
    format_error("bit stream length " + std::to_string(bits.size()) +
                 " does not match " + std::to_string(width) + "x" +
                 std::to_string(height) + "x" + std::to_string(channels));
  RasterImage img{width, height, channels, bits_to_bytes(bits)};
  img.validate();
  return img;
}

void PcmAudio::validate() const {
  if (channels == 1) {
    if (!right.empty()) format_error("mono audio with a right channel");
  } else if (channels == 2) {
    if (left.size() != right.size())
      format_error("stereo channels differ in length");
  } else {
    format_error("only mono and stereo audio are supported");
  }
}

namespace {

BitStream amplitudes_to_bits(const std::vector<std::int16_t>& samples) {
  BitStream out;
  out.reserve(samples.size() * 16);
  for (auto s : samples)
    out.append_uint(static_cast<std::uint16_t>(s), 16);
  return out;
}

std::vector<std::int16_t> bits_to_amplitudes(const BitStream& bits) {
  if (bits.size() % 16 != 0)
    format_error("audio bit stream length is not a multiple of 16");
  const auto p = bits.packed();
  std::vector<std::int16_t> out(bits.size() / 16);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<std::int16_t>(
        static_cast<std::uint16_t>(p[2 * i] << 8 | p[2 * i + 1]));
  return out;
}

}  // namespace

AudioBits audio_to_bits(const PcmAudio& audio) {
  audio.validate();
  return {amplitudes_to_bits(audio.left), amplitudes_to_bits(audio.right)};
}

PcmAudio bits_to_audio(const AudioBits& bits, std::uint32_t sample_rate,
                       std::uint16_t channels) {
  PcmAudio audio{sample_rate, channels, bits_to_amplitudes(bits.left),
                 bits_to_amplitudes(bits.right)};
  audio.validate();
  return audio;
}

// ---------------------------------------------------------------------------
// PNM

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = static_cast<char>(bytes_[pos_]);
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string token() {
    skip_space_and_comments();
    std::string out;
    while (pos_ < bytes_.size() &&
           !std::isspace(static_cast<unsigned char>(bytes_[pos_])) &&
           bytes_[pos_] != '#')
      out.push_back(static_cast<char>(bytes_[pos_++]));
    if (out.empty()) format_error("truncated image header");
    return out;
  }

  std::uint32_t number() {
    const std::string t = token();
    std::uint64_t v = 0;
    for (char c : t) {
      if (c < '0' || c > '9') format_error("bad number '" + t + "' in header");
      v = v * 10 + static_cast<unsigned>(c - '0');
      if (v > 0xFFFFFFFFu) format_error("header number out of range");
    }
    return static_cast<std::uint32_t>(v);
  }

  /// Consumes the single whitespace byte that ends a P6 header.
  void end_of_header() {
    if (pos_ >= bytes_.size() ||
        !std::isspace(static_cast<unsigned char>(bytes_[pos_])))
      format_error("missing whitespace after image header");
    ++pos_;
  }

  void line_end() {
    while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
    if (pos_ < bytes_.size()) ++pos_;
  }

  std::size_t pos() const { return pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

PnmFile parse_pnm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P')
    format_error("not a portable pixmap");
  HeaderReader r(bytes);
  const std::string magic = r.token();
  RasterImage img;
  if (magic == "P6") {
    img.width = r.number();
    img.height = r.number();
    const auto maxval = r.number();
    if (maxval != 255) format_error("only 8-bit (maxval 255) pixmaps are supported");
    r.end_of_header();
    img.channels = 3;
  } else if (magic == "P7") {
    std::uint32_t depth = 0, maxval = 0;
    bool w = false, h = false;
    for (;;) {
      const std::string key = r.token();
      if (key == "ENDHDR") {
        r.line_end();
        break;
      }
      if (key == "WIDTH") {
        img.width = r.number();
        w = true;
      } else if (key == "HEIGHT") {
        img.height = r.number();
        h = true;
      } else if (key == "DEPTH") {
        depth = r.number();
      } else if (key == "MAXVAL") {
        maxval = r.number();
      } else if (key == "TUPLTYPE") {
        r.token();
      } else {
        format_error("unknown arbitrary-map header field " + key);
      }
    }
    if (!w || !h) format_error("arbitrary map lacks WIDTH or HEIGHT");
    if (maxval != 255) format_error("only MAXVAL 255 is supported");
    if (depth != 3 && depth != 4) format_error("only DEPTH 3 or 4 is supported");
    img.channels = static_cast<std::uint8_t>(depth);
  } else {
    format_error("unsupported pixmap variant " + magic);
  }

  const std::size_t start = r.pos();
  const std::uint64_t count = std::uint64_t{img.width} * img.height * img.channels;
  if (bytes.size() - start < count) format_error("truncated pixel data");
  PnmFile file;
  file.header.assign(bytes.begin(), bytes.begin() + start);
  img.samples.assign(bytes.begin() + start, bytes.begin() + start + count);
  file.trailer.assign(bytes.begin() + start + count, bytes.end());
  file.image = std::move(img);
  return file;
}

std::vector<std::uint8_t> serialize(const PnmFile& file) {
  file.image.validate();
  std::vector<std::uint8_t> out(file.header);
  out.insert(out.end(), file.image.samples.begin(), file.image.samples.end());
  out.insert(out.end(), file.trailer.begin(), file.trailer.end());
  return out;
}

std::vector<std::uint8_t> encode_pnm(const RasterImage& image) {
  image.validate();
  std::string header;
  if (image.channels == 3) {
    header = "P6\n" + std::to_string(image.width) + " " +
             std::to_string(image.height) + "\n255\n";
  } else {
    header = "P7\nWIDTH " + std::to_string(image.width) + "\nHEIGHT " +
             std::to_string(image.height) +
             "\nDEPTH 4\nMAXVAL 255\nTUPLTYPE RGB_ALPHA\nENDHDR\n";
  }
  PnmFile file{{header.begin(), header.end()}, image, {}};
  return serialize(file);
}

// ---------------------------------------------------------------------------
// WAV

namespace {

std::uint32_t le32(std::span<const std::uint8_t> b, std::size_t at) {
  return std::uint32_t{b[at]} | std::uint32_t{b[at + 1]} << 8 |
         std::uint32_t{b[at + 2]} << 16 | std::uint32_t{b[at + 3]} << 24;
}

std::uint16_t le16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | b[at + 1] << 8);
}

void put_le32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_le16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, std::string_view tag) {
  return b.size() >= at + 4 && std::string_view(
      reinterpret_cast<const char*>(b.data() + at), 4) == tag;
}

}  // namespace

WavFile parse_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE"))
    format_error("not a RIFF/WAVE file");
  std::size_t pos = 12;
  bool have_fmt = false;
  std::uint16_t channels = 0, bits = 0;
  std::uint32_t rate = 0;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = le32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (size > bytes.size() - body) format_error("truncated RIFF chunk");
    if (tag_is(bytes, pos, "fmt ")) {
      if (size < 16) format_error("fmt chunk too short");
      const std::uint16_t tag = le16(bytes, body);
      channels = le16(bytes, body + 2);
      rate = le32(bytes, body + 4);
      bits = le16(bytes, body + 14);
      if (tag != 1 && tag != 0xFFFE) format_error("audio is not uncompressed PCM");
      if (bits != 16) format_error("only 16-bit PCM is supported");
      if (channels != 1 && channels != 2)
        format_error("only mono or stereo PCM is supported");
      have_fmt = true;
    } else if (tag_is(bytes, pos, "data")) {
      if (!have_fmt) format_error("data chunk precedes fmt chunk");
      const std::size_t frame = 2u * channels;
      if (size % frame != 0) format_error("data chunk is not whole sample frames");
      WavFile file;
      file.prefix.assign(bytes.begin(), bytes.begin() + body);
      file.suffix.assign(bytes.begin() + body + size, bytes.end());
      auto& a = file.audio;
      a.sample_rate = rate;
      a.channels = channels;
      const std::size_t frames = size / frame;
      a.left.reserve(frames);
      if (channels == 2) a.right.reserve(frames);
      for (std::size_t f = 0; f < frames; ++f) {
        const std::size_t at = body + f * frame;
        a.left.push_back(static_cast<std::int16_t>(le16(bytes, at)));
        if (channels == 2)
          a.right.push_back(static_cast<std::int16_t>(le16(bytes, at + 2)));
      }
      return file;
    }
    pos = body + size + (size & 1u);
  }
  format_error("RIFF/WAVE file has no data chunk");
}

std::vector<std::uint8_t> serialize(const WavFile& file) {
  const auto& a = file.audio;
  a.validate();
  std::vector<std::uint8_t> out(file.prefix);
  out.reserve(out.size() + a.left.size() * 2 * a.channels + file.suffix.size());
  for (std::size_t i = 0; i < a.left.size(); ++i) {
    put_le16(out, static_cast<std::uint16_t>(a.left[i]));
    if (a.channels == 2) put_le16(out, static_cast<std::uint16_t>(a.right[i]));
  }
  out.insert(out.end(), file.suffix.begin(), file.suffix.end());
  return out;
}

std::vector<std::uint8_t> encode_wav(const PcmAudio& audio) {
  audio.validate();
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(audio.left.size() * 2 * audio.channels);
  WavFile file;
  auto& h = file.prefix;
  const char* riff = "RIFF";
  h.insert(h.end(), riff, riff + 4);
  put_le32(h, 36 + data_bytes);
  const char* wave = "WAVEfmt ";
  h.insert(h.end(), wave, wave + 8);
  put_le32(h, 16);
  put_le16(h, 1);
  put_le16(h, audio.channels);
  put_le32(h, audio.sample_rate);
  put_le32(h, audio.sample_rate * 2u * audio.channels);
  put_le16(h, static_cast<std::uint16_t>(2 * audio.channels));
  put_le16(h, 16);
  const char* data = "data";
  h.insert(h.end(), data, data + 4);
  put_le32(h, data_bytes);
  file.audio = audio;
  return serialize(file);
}

}  // namespace permx
