#include "permx/keyfile.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>

#include <string>

#include "permx/error.hpp"
#include "permx/fileio.hpp"

namespace permx {

namespace keyfile {

std::size_t index_width(std::size_t n) noexcept {
  if (n - 1 <= 0xFFu) return 1;
  if (n - 1 <= 0xFFFFu) return 2;
  return 4;
}

std::uint64_t file_size(std::size_t n, std::size_t m,
                        std::uint64_t permuted_chunks) noexcept {
  const auto bits = static_cast<std::uint64_t>(std::countr_zero(m));
  return kHeaderSize + std::uint64_t{m} * n * index_width(n) +
         (permuted_chunks * bits + 7) / 8 + 4;
}

}  // namespace keyfile

namespace {

[[noreturn]] void corrupt(const std::string& what) {
  throw Error(ErrorKind::format, "key file: " + what);
}

void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, std::size_t width) {
  for (std::size_t i = 0; i < width; ++i)
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(std::span<const std::uint8_t> b, std::size_t at,
                     std::size_t width) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width; ++i) v |= std::uint64_t{b[at + i]} << (8 * i);
  return v;
}

std::uint32_t crc_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large inputs in pieces.
  while (!bytes.empty()) {
    const auto piece = std::min<std::size_t>(bytes.size(), 1u << 30);
    crc = crc32(crc, bytes.data(), static_cast<uInt>(piece));
    bytes = bytes.subspan(piece);
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::vector<std::uint8_t> encode_key(const KeyTrace& trace) {
  trace.validate();
  const std::size_t n = trace.set.block_size();
  const std::size_t m = trace.set.count();
  const std::size_t width = keyfile::index_width(n);

  std::vector<std::uint8_t> out;
  out.reserve(keyfile::file_size(n, m, trace.permuted_chunks()));
  out.insert(out.end(), keyfile::kMagic.begin(), keyfile::kMagic.end());
  put_le(out, keyfile::kVersion, 2);
  put_le(out, n, 4);
  put_le(out, m, 4);
  put_le(out, static_cast<std::uint8_t>(trace.tail), 1);
  put_le(out, trace.original_length, 8);
  for (const auto& map : trace.set.maps())
    for (auto t : map.targets()) put_le(out, t, width);

  BitStream sel;
  sel.reserve(trace.selections.size() * trace.set.selector_bits());
  for (auto s : trace.selections) sel.append_uint(s, trace.set.selector_bits());
  out.insert(out.end(), sel.packed().begin(), sel.packed().end());

  put_le(out, crc_of(out), 4);
  return out;
}

KeyTrace decode_key(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < keyfile::kHeaderSize + 4) corrupt("truncated header");
  if (std::string_view(reinterpret_cast<const char*>(bytes.data()), 8) !=
      keyfile::kMagic)
    corrupt("bad magic");
  const auto version = get_le(bytes, 8, 2);
  if (version != keyfile::kVersion)
    corrupt("unsupported version " + std::to_string(version));
  const auto body = bytes.first(bytes.size() - 4);
  if (crc_of(body) != get_le(bytes, bytes.size() - 4, 4))
    corrupt("checksum mismatch");

  const auto n = get_le(bytes, 10, 4);
  const auto m = get_le(bytes, 14, 4);
  const auto tail_code = get_le(bytes, 18, 1);
  const auto original_length = get_le(bytes, 19, 8);
  if (!is_power_of_two(n) || n < 2) corrupt("block size is not a power of two");
  if (!is_power_of_two(m)) corrupt("map count is not a power of two");
  if (tail_code > 2) corrupt("unknown tail policy " + std::to_string(tail_code));
  const auto tail = static_cast<TailPolicy>(tail_code);

  // Chunk count as the trace will compute it.
  std::uint64_t chunks = original_length / n;
  if (tail == TailPolicy::pad_zero && original_length % n != 0) ++chunks;
  const std::size_t width = keyfile::index_width(n);
  const unsigned sel_bits = static_cast<unsigned>(std::countr_zero(m));
  // A single map needs no selection bits, so only then is chunks unbounded.
  if (m * n > bytes.size() || (sel_bits > 0 && chunks > bytes.size() * 8 / sel_bits))
    corrupt("geometry does not fit the file");
  if (bytes.size() != keyfile::file_size(n, m, chunks))
    corrupt("length does not match header geometry");

  std::vector<PermutationMap> maps;
  maps.reserve(m);
  std::size_t at = keyfile::kHeaderSize;
  for (std::uint64_t k = 0; k < m; ++k) {
    std::vector<std::uint32_t> targets(n);
    for (auto& t : targets) {
      t = static_cast<std::uint32_t>(get_le(bytes, at, width));
      at += width;
    }
    if (!is_bijection(targets))
      corrupt("map " + std::to_string(k) + " is not a permutation");
    maps.emplace_back(std::move(targets));
  }

  const std::uint64_t sel_bytes = (chunks * sel_bits + 7) / 8;
  const BitStream packed =
      BitStream::from_bytes(bytes.subspan(at, sel_bytes), chunks * sel_bits);
  if (packed.size() < sel_bytes * 8) {
    // Padding bits must be zero for the encoding to be canonical.
    for (std::size_t i = packed.size(); i < sel_bytes * 8; ++i)
      if ((bytes[at + i / 8] >> (7 - i % 8)) & 1u) corrupt("nonzero padding bits");
  }
  KeyTrace trace{PermutationSet(std::move(maps)), {}, tail, original_length};
  trace.selections.reserve(chunks);
  for (std::uint64_t c = 0; c < chunks; ++c) {
    std::uint32_t v = 0;
    for (unsigned b = 0; b < sel_bits; ++b)
      v = (v << 1) | (packed.get(c * sel_bits + b) ? 1u : 0u);
    trace.selections.push_back(v);
  }
  return trace;
}

void save_key(const KeyTrace& trace, const std::filesystem::path& path) {
  write_file_atomic(path, encode_key(trace));
}

KeyTrace load_key(const std::filesystem::path& path) {
  return decode_key(read_file(path));
}

}  // namespace permx
