#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "permx/transform.hpp"

namespace permx {

/// Key file layout, all integers little-endian:
///
///   offset  size  field
///        0     8  magic "PERMXKEY"
///        8     2  version (1)
///       10     4  block size N
///       14     4  map count m
///       18     1  tail policy (0 identity, 1 drop, 2 pad)
///       19     8  original length in bits
///       27  m*N*w maps, 0-based targets, w = 1, 2 or 4 bytes (smallest
///                 width holding N - 1)
///        .     s  selections, log2(m) bits each, MSB first, zero padded
///        .     4  CRC-32 (zlib polynomial) of every preceding byte
namespace keyfile {
inline constexpr std::string_view kMagic = "PERMXKEY";
inline constexpr std::uint16_t kVersion = 1;
inline constexpr std::size_t kHeaderSize = 27;
inline constexpr std::string_view kExtension = ".pxk";

/// Bytes per stored index for block size `n`.
std::size_t index_width(std::size_t n) noexcept;
/// Exact file size for the given geometry.
std::uint64_t file_size(std::size_t n, std::size_t m,
                        std::uint64_t permuted_chunks) noexcept;
}  // namespace keyfile

std::vector<std::uint8_t> encode_key(const KeyTrace& trace);
/// Checks magic, version and checksum before trusting any other field, then
/// re-validates every map. Throws Error(format).
KeyTrace decode_key(std::span<const std::uint8_t> bytes);

void save_key(const KeyTrace& trace, const std::filesystem::path& path);
KeyTrace load_key(const std::filesystem::path& path);

}  // namespace permx
