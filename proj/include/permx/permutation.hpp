#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "permx/bitstream.hpp"
#include "permx/entropy.hpp"

namespace permx {

/// Sparse N x N permutation matrix: row i holds its single 1 in column
/// targets()[i]. Indices are 0-based; the dense matrix is never built.
class PermutationMap {
 public:
  /// Throws Error(contract) unless `targets` is a bijection on [0, size).
  explicit PermutationMap(std::vector<std::uint32_t> targets);

  static PermutationMap identity(std::size_t size);
  static PermutationMap from_one_based(std::span<const std::uint32_t> targets);

  std::size_t size() const noexcept { return targets_.size(); }
  std::span<const std::uint32_t> targets() const noexcept { return targets_; }
  std::uint32_t operator[](std::size_t row) const noexcept {
    return targets_[row];
  }
  std::vector<std::uint32_t> one_based() const;
  bool is_identity() const noexcept;

  friend bool operator==(const PermutationMap&,
                         const PermutationMap&) = default;

 private:
  std::vector<std::uint32_t> targets_;
};

bool is_bijection(std::span<const std::uint32_t> targets) noexcept;

enum class ShuffleMode {
  /// Textbook Fisher-Yates: step i swaps with an index uniform on [1, i].
  unbiased,
  /// Every swap index uniform on [1, N]. Not uniform over permutations; kept
  /// for reproducing the original experiments.
  full_range,
};

/// Draws a permutation of `size` elements from `source`.
PermutationMap generate_permutation(std::size_t size, EntropySource& source,
                                    ShuffleMode mode = ShuffleMode::unbiased);

/// y = P v, i.e. out[i] = in[targets[i]]. Linear in the block size.
BitBlock apply_permutation(const PermutationMap& map, const BitBlock& block);

/// Permutes map.size() bits of `src` starting at `src_offset` into `dst`
/// starting at `dst_offset`. Both ranges must be in bounds.
void apply_permutation_into(const PermutationMap& map, const BitStream& src,
                            std::size_t src_offset, BitStream& dst,
                            std::size_t dst_offset);

PermutationMap invert_permutation(const PermutationMap& map);

/// m maps of a common power-of-two size, selected by log2(m)-bit indices.
class PermutationSet {
 public:
  explicit PermutationSet(std::vector<PermutationMap> maps);

  std::size_t block_size() const noexcept { return maps_.front().size(); }
  std::size_t count() const noexcept { return maps_.size(); }
  /// Bits consumed to pick one map.
  unsigned selector_bits() const noexcept { return selector_bits_; }

  const PermutationMap& operator[](std::size_t i) const noexcept {
    return maps_[i];
  }
  std::span<const PermutationMap> maps() const noexcept { return maps_; }

  friend bool operator==(const PermutationSet& a, const PermutationSet& b) {
    return a.maps_ == b.maps_;
  }

 private:
  std::vector<PermutationMap> maps_;
  unsigned selector_bits_ = 0;
};

/// `count` independent maps; duplicates are kept.
PermutationSet generate_set(std::size_t block_size, std::size_t count,
                            EntropySource& source,
                            ShuffleMode mode = ShuffleMode::unbiased);

constexpr bool is_power_of_two(std::uint64_t v) noexcept {
  return v != 0 && (v & (v - 1)) == 0;
}

}  // namespace permx
