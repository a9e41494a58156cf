#include "permx/transform.hpp"

#include <algorithm>
#include <string>

#include "permx/error.hpp"

namespace permx {

std::string_view to_string(TailPolicy tail) noexcept {
  switch (tail) {
    case TailPolicy::identity_pass:
      return "identity";
    case TailPolicy::drop:
      return "drop";
    case TailPolicy::pad_zero:
      return "pad";
  }
  return "unknown";
}

TailPolicy parse_tail_policy(std::string_view name) {
  if (name == "identity" || name == "identity-pass")
    return TailPolicy::identity_pass;
  if (name == "drop") return TailPolicy::drop;
  if (name == "pad" || name == "pad-zero") return TailPolicy::pad_zero;
  throw Error(ErrorKind::config, "unknown tail policy '" + std::string(name) +
                                     "' (expected identity, drop or pad)");
}

std::uint64_t KeyTrace::permuted_chunks() const noexcept {
  return full_chunks() +
         (tail == TailPolicy::pad_zero && tail_bits() != 0 ? 1 : 0);
}

std::uint64_t KeyTrace::output_length() const noexcept {
  const std::uint64_t n = set.block_size();
  switch (tail) {
    case TailPolicy::identity_pass:
      return original_length;
    case TailPolicy::drop:
      return full_chunks() * n;
    case TailPolicy::pad_zero:
      return permuted_chunks() * n;
  }
  return original_length;
}

void KeyTrace::validate() const {
  if (selections.size() != permuted_chunks())
    contract_violation("trace has " + std::to_string(selections.size()) +
                       " selections, expected " +
                       std::to_string(permuted_chunks()));
  for (auto s : selections)
    if (s >= set.count())
      contract_violation("selection index " + std::to_string(s) +
                         " out of range for " + std::to_string(set.count()) +
                         " maps");
}

std::vector<std::uint32_t> draw_selections(EntropySource& source,
                                           const PermutationSet& set,
                                           std::uint64_t chunks) {
  std::vector<std::uint32_t> out;
  out.reserve(chunks);
  const unsigned width = set.selector_bits();
  for (std::uint64_t c = 0; c < chunks; ++c) {
    try {
      out.push_back(static_cast<std::uint32_t>(source.next_uint(width)));
    } catch (const EntropyExhausted& e) {
      throw EntropyExhausted(e.bits_consumed(), e.bits_requested(), c);
    }
  }
  return out;
}

BitStream apply_selections(const BitStream& input, const KeyTrace& trace) {
  if (input.size() != trace.original_length)
    contract_violation("input length does not match trace");
  trace.validate();
  const std::size_t n = trace.set.block_size();
  const std::uint64_t full = trace.full_chunks();

  BitStream out(trace.output_length());
  for (std::uint64_t c = 0; c < full; ++c)
    apply_permutation_into(trace.set[trace.selections[c]], input, c * n, out,
                           c * n);

  const std::size_t tail_bits = trace.tail_bits();
  if (tail_bits == 0) return out;
  const std::size_t tail_start = full * n;
  if (trace.tail == TailPolicy::identity_pass) {
    for (std::size_t i = 0; i < tail_bits; ++i)
      out.set(tail_start + i, input.get(tail_start + i));
  } else if (trace.tail == TailPolicy::pad_zero) {
    BitStream padded = input.slice(tail_start, tail_bits);
    padded.resize(n);
    apply_permutation_into(trace.set[trace.selections[full]], padded, 0, out,
                           tail_start);
  }
  return out;
}

ExpandResult expand(const BitStream& input, const PermutationSet& set,
                    EntropySource& source, TailPolicy tail) {
  KeyTrace trace{set, {}, tail, input.size()};
  trace.selections = draw_selections(source, set, trace.permuted_chunks());
  BitStream out = apply_selections(input, trace);
  return {std::move(out), std::move(trace)};
}

BitStream invert(const BitStream& input, const KeyTrace& trace) {
  trace.validate();
  if (input.size() != trace.output_length())
    throw Error(ErrorKind::format,
                "input has " + std::to_string(input.size()) +
                    " bits but the key trace expects " +
                    std::to_string(trace.output_length()));
  const std::size_t n = trace.set.block_size();
  const std::uint64_t full = trace.full_chunks();

  std::vector<PermutationMap> inverses;
  inverses.reserve(trace.set.count());
  for (const auto& m : trace.set.maps())
    inverses.push_back(invert_permutation(m));

  const std::uint64_t restored =
      trace.tail == TailPolicy::drop ? full * n : trace.original_length;
  BitStream out(restored);
  for (std::uint64_t c = 0; c < full; ++c)
    apply_permutation_into(inverses[trace.selections[c]], input, c * n, out,
                           c * n);

  const std::size_t tail_bits = trace.tail_bits();
  if (tail_bits == 0 || trace.tail == TailPolicy::drop) return out;
  const std::size_t tail_start = full * n;
  if (trace.tail == TailPolicy::identity_pass) {
    for (std::size_t i = 0; i < tail_bits; ++i)
      out.set(tail_start + i, input.get(tail_start + i));
  } else {
    BitStream chunk(n);
    apply_permutation_into(inverses[trace.selections[full]], input, tail_start,
                           chunk, 0);
    for (std::size_t i = 0; i < tail_bits; ++i)
      out.set(tail_start + i, chunk.get(i));
  }
  return out;
}

RepeatResult repeat_expand(const BitStream& input, const PermutationSet& set,
                           EntropySource& source, TailPolicy tail,
                           unsigned times) {
  if (times == 0) contract_violation("repeat count must be at least 1");
  RepeatResult result{input, {}};
  result.traces.reserve(times);
  for (unsigned pass = 0; pass < times; ++pass) {
    auto step = expand(result.output, set, source, tail);
    result.output = std::move(step.output);
    result.traces.push_back(std::move(step.trace));
  }
  return result;
}

BitStream invert_all(BitStream input, std::span<const KeyTrace> traces) {
  for (auto it = traces.rbegin(); it != traces.rend(); ++it)
    input = invert(input, *it);
  return input;
}

namespace {

std::size_t chunk_bytes_for(const PermutationSet& set) {
  if (set.block_size() % 8 != 0)
    contract_violation("streaming requires a block size that is a multiple of 8");
  return set.block_size() / 8;
}

// Permutes one byte-aligned chunk from `in` into `out` (both chunk-sized).
void permute_bytes(const PermutationMap& map, std::span<const std::uint8_t> in,
                   std::uint8_t* out) {
  const auto targets = map.targets();
  for (std::size_t byte = 0; byte < in.size(); ++byte) {
    unsigned v = 0;
    for (std::size_t k = 0; k < 8; ++k) {
      const std::uint32_t p = targets[byte * 8 + k];
      v = (v << 1) | ((in[p >> 3] >> (7 - (p & 7))) & 1u);
    }
    out[byte] = static_cast<std::uint8_t>(v);
  }
}

}  // namespace

StreamExpander::StreamExpander(PermutationSet set, EntropySource& source,
                               TailPolicy tail)
    : trace_{std::move(set), {}, tail, 0},
      source_(source),
      chunk_bytes_(chunk_bytes_for(trace_.set)) {
  pending_.reserve(chunk_bytes_);
}

void StreamExpander::emit_chunk(std::span<const std::uint8_t> chunk,
                                std::vector<std::uint8_t>& out) {
  const auto index = trace_.selections.size();
  try {
    trace_.selections.push_back(static_cast<std::uint32_t>(
        source_.next_uint(trace_.set.selector_bits())));
  } catch (const EntropyExhausted& e) {
    throw EntropyExhausted(e.bits_consumed(), e.bits_requested(), index);
  }
  const auto at = out.size();
  out.resize(at + chunk_bytes_);
  permute_bytes(trace_.set[trace_.selections.back()], chunk, out.data() + at);
}

void StreamExpander::feed(std::span<const std::uint8_t> bytes,
                          std::vector<std::uint8_t>& out) {
  if (finished_) contract_violation("feed after finish");
  trace_.original_length += static_cast<std::uint64_t>(bytes.size()) * 8;
  if (!pending_.empty()) {
    const auto take = std::min(chunk_bytes_ - pending_.size(), bytes.size());
    pending_.insert(pending_.end(), bytes.begin(), bytes.begin() + take);
    bytes = bytes.subspan(take);
    if (pending_.size() < chunk_bytes_) return;
    emit_chunk(pending_, out);
    pending_.clear();
  }
  while (bytes.size() >= chunk_bytes_) {
    emit_chunk(bytes.first(chunk_bytes_), out);
    bytes = bytes.subspan(chunk_bytes_);
  }
  pending_.assign(bytes.begin(), bytes.end());
}

void StreamExpander::finish(std::vector<std::uint8_t>& out) {
  if (finished_) return;
  finished_ = true;
  if (pending_.empty()) return;
  switch (trace_.tail) {
    case TailPolicy::identity_pass:
      out.insert(out.end(), pending_.begin(), pending_.end());
      break;
    case TailPolicy::drop:
      break;
    case TailPolicy::pad_zero:
      pending_.resize(chunk_bytes_, 0);
      emit_chunk(pending_, out);
      break;
  }
  pending_.clear();
}

StreamInverter::StreamInverter(KeyTrace trace)
    : trace_(std::move(trace)), chunk_bytes_(chunk_bytes_for(trace_.set)) {
  trace_.validate();
  if (trace_.original_length % 8 != 0)
    contract_violation("streaming invert requires a byte-aligned original");
  inverses_.reserve(trace_.set.count());
  for (const auto& m : trace_.set.maps())
    inverses_.push_back(invert_permutation(m));
}

void StreamInverter::emit_chunk(std::span<const std::uint8_t> chunk,
                                std::vector<std::uint8_t>& out) {
  std::vector<std::uint8_t> plain(chunk_bytes_);
  permute_bytes(inverses_[trace_.selections[chunks_done_]], chunk, plain.data());
  std::size_t keep = chunk_bytes_;
  if (chunks_done_ == trace_.full_chunks())  // the padded tail chunk
    keep = static_cast<std::size_t>(trace_.tail_bits() / 8);
  out.insert(out.end(), plain.begin(), plain.begin() + keep);
  ++chunks_done_;
}

void StreamInverter::feed(std::span<const std::uint8_t> bytes,
                          std::vector<std::uint8_t>& out) {
  if (finished_) contract_violation("feed after finish");
  bytes_seen_ += bytes.size();
  if (bytes_seen_ * 8 > trace_.output_length())
    throw Error(ErrorKind::format, "input is longer than the key trace allows");
  const auto permuted = trace_.permuted_chunks();
  while (!bytes.empty()) {
    if (chunks_done_ == permuted) {
      out.insert(out.end(), bytes.begin(), bytes.end());  // identity tail
      return;
    }
    const auto take = std::min(chunk_bytes_ - pending_.size(), bytes.size());
    pending_.insert(pending_.end(), bytes.begin(), bytes.begin() + take);
    bytes = bytes.subspan(take);
    if (pending_.size() == chunk_bytes_) {
      emit_chunk(pending_, out);
      pending_.clear();
    }
  }
}

void StreamInverter::finish(std::vector<std::uint8_t>& /*out*/) {
  if (finished_) return;
  finished_ = true;
  if (bytes_seen_ * 8 != trace_.output_length())
    throw Error(ErrorKind::format,
                "input has " + std::to_string(bytes_seen_ * 8) +
                    " bits but the key trace expects " +
                    std::to_string(trace_.output_length()));
}

}  // namespace permx
