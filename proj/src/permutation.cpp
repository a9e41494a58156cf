#include "permx/permutation.hpp"

#include <bit>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "permx/error.hpp"

namespace permx {

bool is_bijection(std::span<const std::uint32_t> targets) noexcept {
  std::vector<bool> seen(targets.size(), false);
  for (auto t : targets) {
    if (t >= targets.size() || seen[t]) return false;
    seen[t] = true;
  }
  return true;
}

PermutationMap::PermutationMap(std::vector<std::uint32_t> targets)
    : targets_(std::move(targets)) {
  if (targets_.empty()) contract_violation("permutation of size zero");
  if (!is_bijection(targets_))
    contract_violation("permutation targets are not a bijection");
}

PermutationMap PermutationMap::identity(std::size_t size) {
  std::vector<std::uint32_t> t(size);
  std::iota(t.begin(), t.end(), 0u);
  return PermutationMap(std::move(t));
}

PermutationMap PermutationMap::from_one_based(
    std::span<const std::uint32_t> targets) {
  std::vector<std::uint32_t> t;
  t.reserve(targets.size());
  for (auto v : targets) {
    if (v == 0) contract_violation("one-based target of 0");
    t.push_back(v - 1);
  }
  return PermutationMap(std::move(t));
}

std::vector<std::uint32_t> PermutationMap::one_based() const {
  std::vector<std::uint32_t> out(targets_);
  for (auto& v : out) ++v;
  return out;
}

bool PermutationMap::is_identity() const noexcept {
  for (std::size_t i = 0; i < targets_.size(); ++i)
    if (targets_[i] != i) return false;
  return true;
}

PermutationMap generate_permutation(std::size_t size, EntropySource& source,
                                    ShuffleMode mode) {
  if (size == 0) contract_violation("permutation of size zero");
  if (size > std::numeric_limits<std::uint32_t>::max())
    contract_violation("permutation too large");
  std::vector<std::uint32_t> s(size);
  std::iota(s.begin(), s.end(), 0u);

  if (mode == ShuffleMode::full_range) {
    // All swap indices are drawn up front, then applied from the last row
    // down, in the order of the original listing.
    std::vector<std::uint32_t> k(size);
    for (auto& v : k)
      v = static_cast<std::uint32_t>(source.random_int(1, size) - 1);
    for (std::size_t i = size; i-- > 0;) std::swap(s[k[i]], s[i]);
  } else {
    for (std::size_t i = size; i-- > 0;) {
      const auto j = static_cast<std::size_t>(source.random_int(1, i + 1) - 1);
      std::swap(s[j], s[i]);
    }
  }
  return PermutationMap(std::move(s));
}

void apply_permutation_into(const PermutationMap& map, const BitStream& src,
                            std::size_t src_offset, BitStream& dst,
                            std::size_t dst_offset) {
  const std::size_t n = map.size();
  if (src_offset + n > src.size() || dst_offset + n > dst.size())
    contract_violation("permutation range out of bounds");
  const auto targets = map.targets();
  if (n % 8 == 0 && src_offset % 8 == 0 && dst_offset % 8 == 0) {
    const std::uint8_t* in = src.packed().data() + src_offset / 8;
    std::uint8_t* out = dst.packed_mut().data() + dst_offset / 8;
    for (std::size_t byte = 0; byte < n / 8; ++byte) {
      unsigned v = 0;
      for (std::size_t k = 0; k < 8; ++k) {
        const std::uint32_t p = targets[byte * 8 + k];
        v = (v << 1) | ((in[p >> 3] >> (7 - (p & 7))) & 1u);
      }
      out[byte] = static_cast<std::uint8_t>(v);
    }
    return;
  }
  for (std::size_t i = 0; i < n; ++i)
    dst.set(dst_offset + i, src.get(src_offset + targets[i]));
}

BitBlock apply_permutation(const PermutationMap& map, const BitBlock& block) {
  if (block.size() != map.size())
    contract_violation("block length " + std::to_string(block.size()) +
                       " does not match permutation size " +
                       std::to_string(map.size()));
  BitBlock out(block.size());
  apply_permutation_into(map, block, 0, out, 0);
  return out;
}

PermutationMap invert_permutation(const PermutationMap& map) {
  std::vector<std::uint32_t> inv(map.size());
  for (std::size_t i = 0; i < map.size(); ++i)
    inv[map[i]] = static_cast<std::uint32_t>(i);
  return PermutationMap(std::move(inv));
}

PermutationSet::PermutationSet(std::vector<PermutationMap> maps)
    : maps_(std::move(maps)) {
  if (maps_.empty()) contract_violation("permutation set is empty");
  if (!is_power_of_two(maps_.size()))
    contract_violation("permutation count must be a power of two");
  const std::size_t n = maps_.front().size();
  if (!is_power_of_two(n))
    contract_violation("block size must be a power of two");
  for (const auto& m : maps_)
    if (m.size() != n) contract_violation("permutation sizes differ in set");
  selector_bits_ = static_cast<unsigned>(std::countr_zero(maps_.size()));
}

PermutationSet generate_set(std::size_t block_size, std::size_t count,
                            EntropySource& source, ShuffleMode mode) {
  if (!is_power_of_two(block_size) || block_size < 2)
    contract_violation("block size must be a power of two >= 2");
  if (!is_power_of_two(count))
    contract_violation("permutation count must be a power of two");
  std::vector<PermutationMap> maps;
  maps.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    maps.push_back(generate_permutation(block_size, source, mode));
  return PermutationSet(std::move(maps));
}

}  // namespace permx
