#include "permx/entropy.hpp"

#include <bit>
#include <limits>

#include "permx/error.hpp"

namespace permx {

void EntropySource::require(std::uint64_t count) const {
  if (const auto cap = capacity(); cap && count > *cap - position_)
    throw EntropyExhausted(position_, count);
}

bool EntropySource::take_bit() {
  if (available_ == 0) {
    current_ = next_byte();
    available_ = 8;
  }
  --available_;
  ++position_;
  return (current_ >> available_) & 1u;
}

BitStream EntropySource::next_bits(std::uint64_t count) {
  require(count);
  BitStream out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(take_bit());
  return out;
}

std::uint64_t EntropySource::next_uint(unsigned width) {
  if (width > 64) contract_violation("next_uint width above 64");
  require(width);
  std::uint64_t v = 0;
  for (unsigned i = 0; i < width; ++i) v = (v << 1) | (take_bit() ? 1u : 0u);
  return v;
}

std::uint64_t EntropySource::random_int(std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi) contract_violation("random_int requires lo <= hi");
  const std::uint64_t span = hi - lo;  // range size minus one
  if (span == 0) return lo;
  const auto width = static_cast<unsigned>(std::bit_width(span));
  for (;;) {
    const std::uint64_t draw = next_uint(width);
    if (draw <= span) return lo + draw;
  }
}

BufferEntropySource::BufferEntropySource(std::vector<std::uint8_t> bytes,
                                         bool cycle, Kind kind)
    : bytes_(std::move(bytes)), cycle_(cycle), kind_(kind) {
  if (cycle_ && bytes_.empty())
    throw Error(ErrorKind::config, "cannot cycle an empty entropy buffer");
}

std::optional<std::uint64_t> BufferEntropySource::capacity() const noexcept {
  if (cycle_) return std::nullopt;
  return static_cast<std::uint64_t>(bytes_.size()) * 8;
}

std::uint8_t BufferEntropySource::next_byte() {
  if (next_ == bytes_.size()) next_ = 0;  // only reachable with cycle_
  return bytes_[next_++];
}

FileEntropySource::FileEntropySource(const std::filesystem::path& path,
                                     bool cycle)
    : path_(path), in_(path, std::ios::binary), cycle_(cycle) {
  if (!in_)
    throw Error(ErrorKind::io, "cannot open entropy file " + path.string());
  std::error_code ec;
  file_bytes_ = std::filesystem::file_size(path, ec);
  if (ec)
    throw Error(ErrorKind::io, "cannot stat entropy file " + path.string());
  if (cycle_ && file_bytes_ == 0)
    throw Error(ErrorKind::config, "cannot cycle an empty entropy file");
}

std::optional<std::uint64_t> FileEntropySource::capacity() const noexcept {
  if (cycle_) return std::nullopt;
  return file_bytes_ * 8;
}

void FileEntropySource::refill() {
  constexpr std::size_t kBlock = 1 << 16;
  buffer_.resize(kBlock);
  in_.read(reinterpret_cast<char*>(buffer_.data()), kBlock);
  auto got = static_cast<std::size_t>(in_.gcount());
  if (got == 0 && cycle_) {
    in_.clear();
    in_.seekg(0);
    in_.read(reinterpret_cast<char*>(buffer_.data()), kBlock);
    got = static_cast<std::size_t>(in_.gcount());
  }
  if (got == 0)
    throw Error(ErrorKind::io, "short read from entropy file " + path_.string());
  buffer_.resize(got);
  next_ = 0;
}

std::uint8_t FileEntropySource::next_byte() {
  if (next_ == buffer_.size()) refill();
  return buffer_[next_++];
}

std::uint8_t SystemEntropySource::next_byte() {
  if (left_ == 0) {
    word_ = device_();
    left_ = 4;
  }
  --left_;
  return static_cast<std::uint8_t>(word_ >> (8 * left_));
}

namespace {

std::mt19937_64 seeded_engine(std::span<const std::uint8_t> seed) {
  std::vector<std::uint32_t> words((seed.size() + 3) / 4, 0);
  for (std::size_t i = 0; i < seed.size(); ++i)
    words[i / 4] |= static_cast<std::uint32_t>(seed[i]) << (24 - 8 * (i % 4));
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::vector<std::uint8_t> parse_hex(std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  if (hex.empty()) throw Error(ErrorKind::config, "empty hex string");
  std::vector<std::uint8_t> out;
  std::size_t i = 0;
  if (hex.size() % 2 == 1) {
    const int d = hex_digit(hex[0]);
    if (d < 0) throw Error(ErrorKind::config, "invalid hex digit");
    out.push_back(static_cast<std::uint8_t>(d));
    i = 1;
  }
  for (; i < hex.size(); i += 2) {
    const int hi = hex_digit(hex[i]);
    const int lo = hex_digit(hex[i + 1]);
    if (hi < 0 || lo < 0) throw Error(ErrorKind::config, "invalid hex digit");
    out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
  }
  return out;
}

SeededEntropySource::SeededEntropySource(std::span<const std::uint8_t> seed)
    : engine_(seeded_engine(seed)) {}

SeededEntropySource::SeededEntropySource(std::uint64_t seed) {
  std::uint8_t bytes[8];
  for (int i = 0; i < 8; ++i)
    bytes[i] = static_cast<std::uint8_t>(seed >> (56 - 8 * i));
  engine_ = seeded_engine(bytes);
}

SeededEntropySource SeededEntropySource::from_hex(std::string_view hex) {
  const auto bytes = parse_hex(hex);
  return SeededEntropySource(std::span<const std::uint8_t>(bytes));
}

std::uint8_t SeededEntropySource::next_byte() {
  if (left_ == 0) {
    word_ = engine_();
    left_ = 8;
  }
  --left_;
  return static_cast<std::uint8_t>(word_ >> (8 * left_));
}

}  // namespace permx
