#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "permx/bitstream.hpp"

namespace permx {

/// Supplier of random bits, consumed most-significant bit of each byte first.
///
/// A source is a single-consumer stream: share one between threads only with
/// external locking. `position()` never decreases.
class EntropySource {
 public:
  enum class Kind { qrng_file, system, deterministic_test };

  virtual ~EntropySource() = default;

  virtual Kind kind() const noexcept = 0;
  /// Total bits this source can ever deliver; nullopt when unbounded.
  virtual std::optional<std::uint64_t> capacity() const noexcept = 0;

  std::uint64_t position() const noexcept { return position_; }

  /// Next `count` bits in consumption order. Throws EntropyExhausted without
  /// consuming anything when fewer than `count` bits remain.
  BitStream next_bits(std::uint64_t count);

  /// Next `width` bits (width <= 64) read as an unsigned big-endian integer.
  std::uint64_t next_uint(unsigned width);

  /// Uniform integer on [lo, hi] by rejection sampling on
  /// ceil(log2(hi - lo + 1))-bit draws. Power-of-two ranges never reject and
  /// a single-value range consumes nothing.
  std::uint64_t random_int(std::uint64_t lo, std::uint64_t hi);

 protected:
  /// Produces the next raw byte. Only called while capacity remains.
  virtual std::uint8_t next_byte() = 0;

 private:
  void require(std::uint64_t count) const;
  bool take_bit();

  std::uint64_t position_ = 0;
  std::uint8_t current_ = 0;
  unsigned available_ = 0;
};

/// In-memory entropy, e.g. a pre-captured QRNG dump. With `cycle` the buffer
/// is reused from the start once exhausted, which is insecure.
class BufferEntropySource final : public EntropySource {
 public:
  explicit BufferEntropySource(std::vector<std::uint8_t> bytes,
                               bool cycle = false,
                               Kind kind = Kind::qrng_file);

  Kind kind() const noexcept override { return kind_; }
  std::optional<std::uint64_t> capacity() const noexcept override;

 protected:
  std::uint8_t next_byte() override;

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t next_ = 0;
  bool cycle_;
  Kind kind_;
};

/// Streams entropy from a raw binary file without loading it whole.
class FileEntropySource final : public EntropySource {
 public:
  explicit FileEntropySource(const std::filesystem::path& path,
                             bool cycle = false);

  Kind kind() const noexcept override { return Kind::qrng_file; }
  std::optional<std::uint64_t> capacity() const noexcept override;

 protected:
  std::uint8_t next_byte() override;

 private:
  void refill();

  std::filesystem::path path_;
  std::ifstream in_;
  std::uint64_t file_bytes_ = 0;
  bool cycle_;
  std::vector<std::uint8_t> buffer_;
  std::size_t next_ = 0;
};

/// Operating-system randomness via std::random_device.
class SystemEntropySource final : public EntropySource {
 public:
  SystemEntropySource() = default;

  Kind kind() const noexcept override { return Kind::system; }
  std::optional<std::uint64_t> capacity() const noexcept override {
    return std::nullopt;
  }

 protected:
  std::uint8_t next_byte() override;

 private:
  std::random_device device_;
  std::uint32_t word_ = 0;
  unsigned left_ = 0;
};

/// Reproducible stream: mt19937_64 seeded through std::seed_seq, both of
/// which the standard fully specifies, so output is identical everywhere.
class SeededEntropySource final : public EntropySource {
 public:
  explicit SeededEntropySource(std::span<const std::uint8_t> seed);
  explicit SeededEntropySource(std::uint64_t seed);
  /// Accepts an optional "0x" prefix; an odd digit count is left-padded.
  static SeededEntropySource from_hex(std::string_view hex);

  Kind kind() const noexcept override { return Kind::deterministic_test; }
  std::optional<std::uint64_t> capacity() const noexcept override {
    return std::nullopt;
  }

 protected:
  std::uint8_t next_byte() override;

 private:
  std::mt19937_64 engine_;
  std::uint64_t word_ = 0;
  unsigned left_ = 0;
};

/// Emits the byte sequence start, start+1, ... (mod 256). Test fixture.
class CounterEntropySource final : public EntropySource {
 public:
  explicit CounterEntropySource(std::uint8_t start = 0) : next_(start) {}

  Kind kind() const noexcept override { return Kind::deterministic_test; }
  std::optional<std::uint64_t> capacity() const noexcept override {
    return std::nullopt;
  }

 protected:
  std::uint8_t next_byte() override { return next_++; }

 private:
  std::uint8_t next_;
};

std::vector<std::uint8_t> parse_hex(std::string_view hex);

}  // namespace permx
