#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "permx/bitstream.hpp"
#include "permx/entropy.hpp"
#include "permx/permutation.hpp"

namespace permx {

/// What happens to the final l mod N bits that do not fill a chunk.
enum class TailPolicy : std::uint8_t {
  identity_pass = 0,  ///< copied through unpermuted; size is preserved
  drop = 1,           ///< omitted from the output
  pad_zero = 2,       ///< zero-filled to a full chunk and permuted
};

std::string_view to_string(TailPolicy tail) noexcept;
TailPolicy parse_tail_policy(std::string_view name);

/// Everything needed to undo one expand pass.
struct KeyTrace {
  PermutationSet set;
  /// One map index per permuted chunk, in chunk order.
  std::vector<std::uint32_t> selections;
  TailPolicy tail = TailPolicy::identity_pass;
  /// Input length in bits.
  std::uint64_t original_length = 0;

  std::uint64_t full_chunks() const noexcept {
    return original_length / set.block_size();
  }
  std::uint64_t tail_bits() const noexcept {
    return original_length % set.block_size();
  }
  /// Chunks that received a selection: full chunks, plus the padded tail
  /// chunk under pad_zero.
  std::uint64_t permuted_chunks() const noexcept;
  std::uint64_t output_length() const noexcept;
  /// Throws Error(contract) if selections disagree with the other fields.
  void validate() const;

  friend bool operator==(const KeyTrace&, const KeyTrace&) = default;
};

struct ExpandResult {
  BitStream output;
  KeyTrace trace;
};

/// Reads one log2(m)-bit selection per chunk, MSB first. On exhaustion the
/// thrown EntropyExhausted names the chunk that could not be served.
std::vector<std::uint32_t> draw_selections(EntropySource& source,
                                           const PermutationSet& set,
                                           std::uint64_t chunks);

/// Applies pre-drawn selections. Pure; `trace` supplies set and tail.
BitStream apply_selections(const BitStream& input, const KeyTrace& trace);

/// Chunks `input` into block_size-bit pieces and replaces each with its
/// permutation under a freshly selected map.
ExpandResult expand(const BitStream& input, const PermutationSet& set,
                    EntropySource& source,
                    TailPolicy tail = TailPolicy::identity_pass);

/// Exact inverse of expand given its trace. Under drop the result is the
/// retained prefix of the original.
BitStream invert(const BitStream& input, const KeyTrace& trace);

struct RepeatResult {
  BitStream output;
  /// In application order.
  std::vector<KeyTrace> traces;
};

RepeatResult repeat_expand(const BitStream& input, const PermutationSet& set,
                           EntropySource& source, TailPolicy tail,
                           unsigned times);

/// Undoes a sequence of passes, last pass first.
BitStream invert_all(BitStream input, std::span<const KeyTrace> traces);

/// Byte-oriented incremental expand. Output depends only on absolute offsets,
/// so any split of the input into feed() calls yields the same bytes as
/// expand() on the whole input. Requires block_size to be a multiple of 8.
class StreamExpander {
 public:
  StreamExpander(PermutationSet set, EntropySource& source,
                 TailPolicy tail = TailPolicy::identity_pass);

  /// Appends transformed bytes for every chunk completed by `bytes`.
  void feed(std::span<const std::uint8_t> bytes, std::vector<std::uint8_t>& out);
  /// Flushes the tail according to the policy and seals the trace.
  void finish(std::vector<std::uint8_t>& out);

  const KeyTrace& trace() const noexcept { return trace_; }
  KeyTrace take_trace() { return std::move(trace_); }

 private:
  void emit_chunk(std::span<const std::uint8_t> chunk,
                  std::vector<std::uint8_t>& out);

  KeyTrace trace_;
  EntropySource& source_;
  std::size_t chunk_bytes_;
  std::vector<std::uint8_t> pending_;
  bool finished_ = false;
};

/// Byte-oriented incremental invert, the counterpart of StreamExpander.
class StreamInverter {
 public:
  explicit StreamInverter(KeyTrace trace);

  void feed(std::span<const std::uint8_t> bytes, std::vector<std::uint8_t>& out);
  /// Throws Error(format) if the fed length does not match the trace.
  void finish(std::vector<std::uint8_t>& out);

 private:
  void emit_chunk(std::span<const std::uint8_t> chunk,
                  std::vector<std::uint8_t>& out);

  KeyTrace trace_;
  std::vector<PermutationMap> inverses_;
  std::size_t chunk_bytes_;
  std::vector<std::uint8_t> pending_;
  std::uint64_t chunks_done_ = 0;
  std::uint64_t bytes_seen_ = 0;
  bool finished_ = false;
};

}  // namespace permx
