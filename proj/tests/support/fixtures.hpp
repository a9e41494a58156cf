#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "permx/codecs.hpp"

namespace permx::testing {

std::filesystem::path data_dir();
/// The English prose samples under tests/data.
std::vector<std::filesystem::path> english_texts();

std::vector<std::uint8_t> random_bytes(std::size_t count, std::uint64_t seed);

/// ASCII text of exactly `bytes` bytes built from words drawn at random out
/// of the English samples, with a line break roughly every 72 columns.
std::vector<std::uint8_t> word_corpus(std::size_t bytes, std::uint64_t seed);

/// Mostly sky-blue picture with a few flat-colored shapes.
RasterImage flat_image(std::uint32_t width, std::uint32_t height);
/// Smooth gradients with per-pixel noise, many distinct colors.
RasterImage detailed_image(std::uint32_t width, std::uint32_t height,
                           std::uint8_t channels = 3);

/// Two-channel mix of tones with a little noise.
PcmAudio stereo_music(std::size_t frames, std::uint32_t sample_rate = 44100);

/// Fresh scratch directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

void write_bytes(const std::filesystem::path& path,
                 const std::vector<std::uint8_t>& bytes);

}  // namespace permx::testing
