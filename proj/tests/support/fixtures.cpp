#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "permx/fileio.hpp"

namespace permx::testing {

namespace fs = std::filesystem;

fs::path data_dir() { return PERMX_TEST_DATA; }

std::vector<fs::path> english_texts() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(data_dir()))
    if (e.path().extension() == ".txt") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint8_t> random_bytes(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> out(count);
  for (std::size_t i = 0; i < count; i += 8) {
    const auto v = rng();
    for (std::size_t k = 0; k < 8 && i + k < count; ++k)
      out[i + k] = static_cast<std::uint8_t>(v >> (8 * k));
  }
  return out;
}

std::vector<std::uint8_t> word_corpus(std::size_t bytes, std::uint64_t seed) {
  std::vector<std::string> words;
  for (const auto& p : english_texts()) {
    std::ifstream in(p);
    std::string w;
    while (in >> w) words.push_back(w);
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  std::vector<std::uint8_t> out;
  out.reserve(bytes + 32);
  std::size_t column = 0;
  while (out.size() < bytes) {
    const std::string& w = words[pick(rng)];
    out.insert(out.end(), w.begin(), w.end());
    column += w.size();
    if (column > 72) {
      out.push_back('\n');
      column = 0;
    } else {
      out.push_back(' ');
      ++column;
    }
  }
  out.resize(bytes);
  return out;
}

RasterImage flat_image(std::uint32_t width, std::uint32_t height) {
  RasterImage img{width, height, 3, {}};
  img.samples.resize(std::size_t{width} * height * 3);
  const double cx = width * 0.5, cy = height * 0.55;
  for (std::uint32_t y = 0; y < height; ++y) {
    for (std::uint32_t x = 0; x < width; ++x) {
      std::uint8_t r = 70, g = 130, b = 200;  // sky
      const double dx = (x - cx) / (width * 0.23), dy = (y - cy) / (height * 0.14);
      const double hx = x - width * 0.68, hy = y - height * 0.41;
      if (dx * dx + dy * dy < 1.0 || hx * hx + hy * hy < (width * 0.07) * (width * 0.07)) {
        r = 30, g = 60, b = 160;  // body and head
      }
      const double ex = x - width * 0.70, ey = y - height * 0.39;
      if (ex * ex + ey * ey < (width * 0.015) * (width * 0.015)) r = g = b = 250;
      if (y > height * 0.8) r = 90, g = 160, b = 60;  // grass
      const std::size_t at = (std::size_t{y} * width + x) * 3;
      img.samples[at] = r;
      img.samples[at + 1] = g;
      img.samples[at + 2] = b;
    }
  }
  return img;
}

RasterImage detailed_image(std::uint32_t width, std::uint32_t height,
                           std::uint8_t channels) {
  RasterImage img{width, height, channels, {}};
  img.samples.resize(std::size_t{width} * height * channels);
  std::mt19937 rng(7);
  std::normal_distribution<double> noise(0.0, 12.0);
  auto clamp = [](double v) {
    return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
  };
  for (std::uint32_t y = 0; y < height; ++y) {
    for (std::uint32_t x = 0; x < width; ++x) {
      const std::size_t at = (std::size_t{y} * width + x) * channels;
      const double u = double(x) / width, v = double(y) / height;
      img.samples[at] = clamp(255 * u + noise(rng));
      img.samples[at + 1] = clamp(128 + 100 * std::sin(8 * u + 5 * v) + noise(rng));
      img.samples[at + 2] = clamp(255 * v * (1 - u) + noise(rng));
      if (channels == 4) img.samples[at + 3] = clamp(200 + 40 * u + noise(rng));
    }
  }
  return img;
}

PcmAudio stereo_music(std::size_t frames, std::uint32_t sample_rate) {
  PcmAudio a{sample_rate, 2, {}, {}};
  a.left.reserve(frames);
  a.right.reserve(frames);
  std::mt19937 rng(11);
  std::normal_distribution<double> noise(0.0, 300.0);
  const double two_pi = 6.283185307179586;
  for (std::size_t i = 0; i < frames; ++i) {
    const double t = double(i) / sample_rate;
    const double l = 9000 * std::sin(two_pi * 220 * t) + 4000 * std::sin(two_pi * 330 * t);
    const double r = 8000 * std::sin(two_pi * 277 * t) + 5000 * std::sin(two_pi * 440 * t);
    a.left.push_back(static_cast<std::int16_t>(std::clamp(l + noise(rng), -32768.0, 32767.0)));
    a.right.push_back(static_cast<std::int16_t>(std::clamp(r + noise(rng), -32768.0, 32767.0)));
  }
  return a;
}

TempDir::TempDir() {
  std::random_device rd;
  path_ = fs::temp_directory_path() / ("permx-test-" + std::to_string(rd()));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  write_file_atomic(path, bytes);
}

}  // namespace permx::testing
