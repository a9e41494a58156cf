#include "permx/error.hpp"

namespace permx {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::io:
      return "io";
    case ErrorKind::entropy_exhausted:
      return "entropy-exhausted";
    case ErrorKind::format:
      return "format";
    case ErrorKind::config:
      return "config";
    case ErrorKind::contract:
      return "contract";
  }
  return "unknown";
}

namespace {

std::string exhausted_message(std::uint64_t consumed, std::uint64_t requested,
                              std::optional<std::uint64_t> chunk) {
  std::string msg = "entropy source exhausted after " +
                    std::to_string(consumed) + " bits (requested " +
                    std::to_string(requested) + " more)";
  if (chunk) msg += " while selecting for chunk " + std::to_string(*chunk);
  return msg;
}

}  // namespace

EntropyExhausted::EntropyExhausted(std::uint64_t bits_consumed,
                                   std::uint64_t bits_requested,
                                   std::optional<std::uint64_t> chunk_index)
    : Error(ErrorKind::entropy_exhausted,
            exhausted_message(bits_consumed, bits_requested, chunk_index)),
      consumed_(bits_consumed),
      requested_(bits_requested),
      chunk_(chunk_index) {}

}  // namespace permx
