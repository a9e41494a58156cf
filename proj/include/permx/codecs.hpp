#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "permx/bitstream.hpp"

namespace permx {

// Raw bytes. Each byte contributes 8 bits, MSB first.
BitStream bytes_to_bits(std::span<const std::uint8_t> bytes);
/// Throws Error(format) unless the stream is a whole number of bytes.
std::vector<std::uint8_t> bits_to_bytes(const BitStream& bits);

/// 8-bit RGB or RGBA raster, row-major from the top-left pixel.
struct RasterImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint8_t channels = 3;
  std::vector<std::uint8_t> samples;

  void validate() const;
  friend bool operator==(const RasterImage&, const RasterImage&) = default;
};

BitStream image_to_bits(const RasterImage& image);
RasterImage bits_to_image(const BitStream& bits, std::uint32_t width,
                          std::uint32_t height, std::uint8_t channels);

/// 16-bit signed PCM. `right` is empty for mono.
struct PcmAudio {
  std::uint32_t sample_rate = 44100;
  std::uint16_t channels = 1;
  std::vector<std::int16_t> left;
  std::vector<std::int16_t> right;

  void validate() const;
  friend bool operator==(const PcmAudio&, const PcmAudio&) = default;
};

/// One bit stream per channel; amplitudes as 16-bit two's complement, MSB
/// first. `right` is empty for mono input.
struct AudioBits {
  BitStream left;
  BitStream right;
};

AudioBits audio_to_bits(const PcmAudio& audio);
PcmAudio bits_to_audio(const AudioBits& bits, std::uint32_t sample_rate,
                       std::uint16_t channels);

/// A parsed container that remembers its exact framing, so re-serializing
/// with modified samples changes nothing but the sample bytes.
struct PnmFile {
  std::vector<std::uint8_t> header;
  RasterImage image;
  std::vector<std::uint8_t> trailer;
};

/// Binary pixmap (P6, maxval 255) or arbitrary map (P7, DEPTH 3 or 4,
/// MAXVAL 255). Throws Error(format) on anything else.
PnmFile parse_pnm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> serialize(const PnmFile& file);
/// Canonical container: P6 for RGB, P7 RGB_ALPHA for RGBA.
std::vector<std::uint8_t> encode_pnm(const RasterImage& image);

struct WavFile {
  std::vector<std::uint8_t> prefix;  ///< everything before the sample data
  PcmAudio audio;
  std::vector<std::uint8_t> suffix;  ///< pad byte and trailing chunks
};

/// RIFF/WAVE with 16-bit PCM, mono or stereo, little-endian.
WavFile parse_wav(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> serialize(const WavFile& file);
std::vector<std::uint8_t> encode_wav(const PcmAudio& audio);

}  // namespace permx
