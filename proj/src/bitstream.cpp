#include "permx/bitstream.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include "permx/error.hpp"

namespace permx {

BitStream::BitStream(std::size_t bit_count)
    : bytes_((bit_count + 7) / 8, 0), size_(bit_count) {}

BitStream BitStream::from_bytes(std::span<const std::uint8_t> bytes) {
  BitStream out;
  out.bytes_.assign(bytes.begin(), bytes.end());
  out.size_ = bytes.size() * 8;
  return out;
}

BitStream BitStream::from_bytes(std::span<const std::uint8_t> bytes,
                                std::size_t bit_count) {
  if (bit_count > bytes.size() * 8)
    contract_violation("bit count exceeds supplied bytes");
  BitStream out;
  out.bytes_.assign(bytes.begin(), bytes.begin() + (bit_count + 7) / 8);
  out.size_ = bit_count;
  out.clear_tail();
  return out;
}

BitStream BitStream::from_string(std::string_view bits) {
  BitStream out;
  for (char c : bits) {
    if (c == '0' || c == '1')
      out.push_back(c == '1');
    else if (c != ' ' && c != '\n' && c != '\t' && c != '_')
      contract_violation(std::string("invalid bit character '") + c + "'");
  }
  return out;
}

void BitStream::push_back(bool bit) {
  if (size_ % 8 == 0) bytes_.push_back(0);
  ++size_;
  set(size_ - 1, bit);
}

void BitStream::append(const BitStream& other, std::size_t offset,
                       std::size_t count) {
  if (offset + count > other.size_ || offset + count < offset)
    contract_violation("append range out of bounds");
  if (count == 0) return;
  if (size_ % 8 == 0 && offset % 8 == 0) {
    const auto* src = other.bytes_.data() + offset / 8;
    bytes_.insert(bytes_.end(), src, src + (count + 7) / 8);
    size_ += count;
    clear_tail();
    return;
  }
  const std::size_t start = size_;
  resize(size_ + count);
  for (std::size_t i = 0; i < count; ++i) set(start + i, other.get(offset + i));
}

void BitStream::append_uint(std::uint64_t value, unsigned width) {
  if (width > 64) contract_violation("append_uint width above 64");
  for (unsigned b = width; b-- > 0;) push_back((value >> b) & 1u);
}

BitStream BitStream::slice(std::size_t offset, std::size_t count) const {
  BitStream out;
  out.reserve(count);
  out.append(*this, offset, count);
  return out;
}

void BitStream::resize(std::size_t bit_count) {
  bytes_.resize((bit_count + 7) / 8, 0);
  size_ = bit_count;
  clear_tail();
}

std::size_t BitStream::count_ones() const noexcept {
  std::size_t total = 0;
  for (auto b : bytes_) total += static_cast<std::size_t>(std::popcount(b));
  return total;
}

std::string BitStream::to_string() const {
  std::string s;
  s.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) s.push_back(get(i) ? '1' : '0');
  return s;
}

void BitStream::clear_tail() noexcept {
  if (size_ % 8 != 0)
    bytes_.back() &= static_cast<std::uint8_t>(0xFFu << (8 - size_ % 8));
}

}  // namespace permx
