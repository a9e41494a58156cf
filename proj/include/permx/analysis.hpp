#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace permx {

/// The five byte-level randomness measures of the ENT battery.
struct RandomnessReport {
  std::uint64_t byte_count = 0;
  double entropy = 0.0;     ///< bits per byte, in [0, 8]
  double chi_square = 0.0;  ///< over 256 equiprobable bins
  double mean = 0.0;
  /// Needs at least one 6-byte group.
  std::optional<double> monte_carlo_pi;
  /// Undefined for constant input.
  std::optional<double> serial_correlation;

  friend bool operator==(const RandomnessReport&,
                         const RandomnessReport&) = default;
};

namespace ideal {
inline constexpr double entropy = 8.0;
// Reference value used for deviation accounting; the statistic's expectation
// for 255 degrees of freedom is 255.
inline constexpr double chi_square = 256.0;
inline constexpr double mean = 127.5;
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double serial_correlation = 0.0;
}  // namespace ideal

// Individual measures. All throw Error(format) on input too short for them.
double shannon_entropy(std::span<const std::uint8_t> bytes);
double chi_square(std::span<const std::uint8_t> bytes);
double arithmetic_mean(std::span<const std::uint8_t> bytes);
/// Successive 6-byte groups become points (X, Y) of two 24-bit big-endian
/// coordinates; a point counts as inside when X^2 + Y^2 <= (2^24 - 1)^2.
/// A trailing partial group is ignored.
double monte_carlo_pi(std::span<const std::uint8_t> bytes);
/// Circular lag-1 correlation; nullopt when the denominator is zero.
std::optional<double> serial_correlation(std::span<const std::uint8_t> bytes);

/// Single-pass fold computing all five measures at once, for streams that
/// arrive in pieces.
class EntAccumulator {
 public:
  void add(std::span<const std::uint8_t> bytes);
  std::uint64_t byte_count() const noexcept { return count_; }
  /// Throws Error(format) if nothing was added.
  RandomnessReport report() const;

 private:
  std::array<std::uint64_t, 256> histogram_{};
  std::uint64_t count_ = 0;
  unsigned __int128 sum_ = 0;
  unsigned __int128 sum_sq_ = 0;
  unsigned __int128 sum_lag_ = 0;
  std::uint8_t first_ = 0;
  std::uint8_t last_ = 0;
  std::array<std::uint8_t, 6> group_{};
  unsigned group_fill_ = 0;
  std::uint64_t points_ = 0;
  std::uint64_t inside_ = 0;
};

RandomnessReport analyze(std::span<const std::uint8_t> bytes);

/// Before/after accounting for one metric.
struct MetricChange {
  std::string name;
  double ideal = 0.0;
  std::optional<double> before;
  std::optional<double> after;
  std::optional<double> before_deviation;  ///< |before - ideal|
  std::optional<double> after_deviation;
  /// Entropy: percent increase of the value itself. Every other metric:
  /// percent decrease of the deviation from ideal.
  std::optional<double> percent;
};

struct Comparison {
  std::vector<MetricChange> metrics;  ///< entropy, chi_square, mean, pi, scc
};

Comparison compare(const RandomnessReport& before,
                   const RandomnessReport& after);

// Serialization. Field order is fixed: byte_count, entropy, chi_square,
// mean, monte_carlo_pi, serial_correlation. Undefined values print as
// "undefined" (null in JSON). Reals carry 6 decimal places.
std::string format_table(const RandomnessReport& report);
std::string format_key_values(const RandomnessReport& report,
                              const std::string& prefix = "");
std::string format_json(const RandomnessReport& report);
std::string format_table(const Comparison& comparison);

}  // namespace permx
