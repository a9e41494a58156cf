#include "doctest.h"
#include "permx/codecs.hpp"
#include "permx/error.hpp"
#include "permx/transform.hpp"
#include "support/fixtures.hpp"

#include <string>

using namespace permx;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("bytes and bits") {
  const std::vector<std::uint8_t> a{0x41};
  CHECK(bytes_to_bits(a).to_string() == "01000001");
  CHECK(bytes_to_bits({}).empty());
  CHECK(bits_to_bytes(BitStream{}).empty());
  const auto r = testing::random_bytes(333, 4);
  CHECK(bits_to_bytes(bytes_to_bits(r)) == r);
  CHECK_THROWS_AS(bits_to_bytes(BitStream::from_string("101")), Error);
}

TEST_CASE("image samples serialize in raster order, 8 bits each") {
  RasterImage px{1, 1, 3, {255, 0, 128}};
  CHECK(image_to_bits(px).to_string() == "111111110000000010000000");
  const auto img = testing::detailed_image(17, 9, 4);
  CHECK(bits_to_image(image_to_bits(img), 17, 9, 4) == img);
  CHECK_THROWS_AS(bits_to_image(image_to_bits(img), 17, 9, 3), Error);
  RasterImage bad{2, 2, 3, {1, 2, 3}};
  CHECK_THROWS_AS(image_to_bits(bad), Error);
}

TEST_CASE("amplitudes are 16-bit two's complement, MSB first") {
  PcmAudio a{8000, 1, {-1, 0, 1, -32768}, {}};
  const auto bits = audio_to_bits(a);
  CHECK(bits.left.slice(0, 16).to_string() == "1111111111111111");
  CHECK(bits.left.slice(16, 16).to_string() == "0000000000000000");
  CHECK(bits.left.slice(32, 16).to_string() == "0000000000000001");
  CHECK(bits.left.slice(48, 16).to_string() == "1000000000000000");
  CHECK(bits.right.empty());
  CHECK(bits_to_audio(bits, 8000, 1) == a);

  const auto stereo = testing::stereo_music(1000);
  CHECK(bits_to_audio(audio_to_bits(stereo), 44100, 2) == stereo);
  AudioBits odd{BitStream::from_string("1010"), {}};
  CHECK_THROWS_AS(bits_to_audio(odd, 8000, 1), Error);
}

TEST_CASE("P6 parsing keeps the header verbatim") {
  auto file = bytes_of("P6\n# made by hand\n2 1\n255\n");
  const std::vector<std::uint8_t> px{1, 2, 3, 4, 5, 6};
  file.insert(file.end(), px.begin(), px.end());
  const auto pnm = parse_pnm(file);
  CHECK(pnm.image.width == 2);
  CHECK(pnm.image.height == 1);
  CHECK(pnm.image.channels == 3);
  CHECK(pnm.image.samples == px);
  CHECK(serialize(pnm) == file);
}

TEST_CASE("canonical encoders round trip") {
  const auto rgb = testing::detailed_image(31, 7, 3);
  CHECK(parse_pnm(encode_pnm(rgb)).image == rgb);
  const auto rgba = testing::detailed_image(5, 12, 4);
  const auto enc = encode_pnm(rgba);
  CHECK(std::string(enc.begin(), enc.begin() + 2) == "P7");
  CHECK(parse_pnm(enc).image == rgba);
  CHECK(serialize(parse_pnm(enc)) == enc);

  const auto music = testing::stereo_music(777, 22050);
  const auto wav = encode_wav(music);
  CHECK(wav.size() == 44 + 777 * 4);
  const auto parsed = parse_wav(wav);
  CHECK(parsed.audio == music);
  CHECK(serialize(parsed) == wav);
}

TEST_CASE("malformed containers are format errors") {
  CHECK_THROWS_AS(parse_pnm(bytes_of("P5\n1 1\n255\n\x01")), Error);
  CHECK_THROWS_AS(parse_pnm(bytes_of("P6\n2 2\n65535\n")), Error);
  CHECK_THROWS_AS(parse_pnm(bytes_of("P6\n2 2\n255\n\x01\x02")), Error);
  CHECK_THROWS_AS(parse_pnm(bytes_of("hello")), Error);
  CHECK_THROWS_AS(parse_wav(bytes_of(std::string("RIFF\0\0\0\0WAVE", 12))), Error);
  auto wav = encode_wav(PcmAudio{8000, 1, {1, 2, 3}, {}});
  wav[34] = 8;  // bits per sample
  CHECK_THROWS_AS(parse_wav(wav), Error);
  try {
    parse_pnm(bytes_of("P3\n1 1\n255\n1 2 3"));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::format);
  }
}

TEST_CASE("wav with extra chunks keeps them around the samples") {
  auto wav = encode_wav(PcmAudio{8000, 2, {1, -2}, {3, -4}});
  const std::string list("LIST\x04\0\0\0abcd", 12);
  wav.insert(wav.end(), list.begin(), list.end());
  const auto parsed = parse_wav(wav);
  CHECK(parsed.audio.left == std::vector<std::int16_t>{1, -2});
  CHECK(parsed.audio.right == std::vector<std::int16_t>{3, -4});
  CHECK(serialize(parsed) == wav);
}

TEST_CASE("full pipeline round trip on media") {
  SeededEntropySource src(12ULL);
  const auto set = generate_set(1024, 8, src);

  const auto img = testing::flat_image(64, 48);
  const auto file = encode_pnm(img);
  auto pnm = parse_pnm(file);
  const auto r = expand(image_to_bits(pnm.image), set, src);
  pnm.image = bits_to_image(r.output, img.width, img.height, img.channels);
  auto transformed = parse_pnm(serialize(pnm));
  CHECK(transformed.image.samples != img.samples);
  transformed.image = bits_to_image(invert(image_to_bits(transformed.image), r.trace),
                                    img.width, img.height, img.channels);
  CHECK(serialize(transformed) == file);

  const auto music = testing::stereo_music(3000);
  const auto wav = encode_wav(music);
  auto parsed = parse_wav(wav);
  auto bits = audio_to_bits(parsed.audio);
  const auto l = expand(bits.left, set, src), rr = expand(bits.right, set, src);
  auto back = bits_to_audio({invert(l.output, l.trace), invert(rr.output, rr.trace)},
                            parsed.audio.sample_rate, 2);
  parsed.audio = back;
  CHECK(serialize(parsed) == wav);
}
