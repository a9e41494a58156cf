#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace permx {

/// Ordered sequence of bits packed MSB-first into bytes.
///
/// Bit i lives in byte i / 8 at bit position 7 - i % 8. Unused low-order bits
/// of the final byte are always zero, so two streams with equal bits also
/// have equal storage.
class BitStream {
 public:
  BitStream() = default;
  explicit BitStream(std::size_t bit_count);

  static BitStream from_bytes(std::span<const std::uint8_t> bytes);
  static BitStream from_bytes(std::span<const std::uint8_t> bytes,
                              std::size_t bit_count);
  /// Parses '0'/'1' characters; whitespace is skipped.
  static BitStream from_string(std::string_view bits);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  bool byte_aligned() const noexcept { return size_ % 8 == 0; }

  bool get(std::size_t i) const noexcept {
    return (bytes_[i >> 3] >> (7 - (i & 7))) & 1u;
  }
  bool operator[](std::size_t i) const noexcept { return get(i); }
  void set(std::size_t i, bool value) noexcept {
    const auto mask = static_cast<std::uint8_t>(0x80u >> (i & 7));
    if (value)
      bytes_[i >> 3] |= mask;
    else
      bytes_[i >> 3] &= static_cast<std::uint8_t>(~mask);
  }

  void push_back(bool bit);
  /// Appends `count` bits of `other` starting at `offset`.
  void append(const BitStream& other, std::size_t offset, std::size_t count);
  void append(const BitStream& other) { append(other, 0, other.size()); }
  /// Appends the low `width` bits of `value`, most significant first.
  void append_uint(std::uint64_t value, unsigned width);

  BitStream slice(std::size_t offset, std::size_t count) const;
  void resize(std::size_t bit_count);
  void reserve(std::size_t bit_count) { bytes_.reserve((bit_count + 7) / 8); }

  std::size_t count_ones() const noexcept;

  /// Packed storage; the tail of the last byte is zero.
  std::span<const std::uint8_t> packed() const noexcept { return bytes_; }
  std::span<std::uint8_t> packed_mut() noexcept { return bytes_; }

  std::string to_string() const;

  friend bool operator==(const BitStream& a, const BitStream& b) noexcept {
    return a.size_ == b.size_ && a.bytes_ == b.bytes_;
  }

 private:
  void clear_tail() noexcept;

  std::vector<std::uint8_t> bytes_;
  std::size_t size_ = 0;
};

/// A single N-bit chunk handed to a permutation.
using BitBlock = BitStream;

}  // namespace permx
