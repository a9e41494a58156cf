#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace permx {

/// Coarse failure category. The CLI maps each one to its own exit code.
enum class ErrorKind {
  io,
  entropy_exhausted,
  format,
  config,
  contract,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when an entropy source cannot supply the requested bits.
class EntropyExhausted : public Error {
 public:
  EntropyExhausted(std::uint64_t bits_consumed, std::uint64_t bits_requested,
                   std::optional<std::uint64_t> chunk_index = std::nullopt);

  std::uint64_t bits_consumed() const noexcept { return consumed_; }
  std::uint64_t bits_requested() const noexcept { return requested_; }
  std::optional<std::uint64_t> chunk_index() const noexcept { return chunk_; }

 private:
  std::uint64_t consumed_;
  std::uint64_t requested_;
  std::optional<std::uint64_t> chunk_;
};

[[noreturn]] inline void contract_violation(const std::string& what) {
  throw Error(ErrorKind::contract, what);
}

}  // namespace permx
