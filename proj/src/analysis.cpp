#include "permx/analysis.hpp"

#include <cmath>
#include <cstdio>
#include "json.hpp"

#include "permx/error.hpp"

namespace permx {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

constexpr std::uint64_t kCoordMax = (1u << 24) - 1;
constexpr std::uint64_t kRadiusSq = kCoordMax * kCoordMax;

void require_bytes(std::span<const std::uint8_t> bytes, std::size_t n,
                   const char* what) {
  if (bytes.size() < n)
    throw Error(ErrorKind::format, std::string(what) + " needs at least " +
                                       std::to_string(n) + " bytes");
}

double entropy_from(const std::array<std::uint64_t, 256>& hist,
                    std::uint64_t n) {
  double h = 0.0;
  const double total = static_cast<double>(n);
  for (auto c : hist) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

double chi_square_from(const std::array<std::uint64_t, 256>& hist,
                       std::uint64_t n) {
  // sum (O - n/256)^2 / (n/256) == sum (256 O - n)^2 / (256 n)
  u128 acc = 0;
  for (auto c : hist) {
    const i128 d = static_cast<i128>(c) * 256 - static_cast<i128>(n);
    acc += static_cast<u128>(d * d);
  }
  return static_cast<double>(acc) / (256.0 * static_cast<double>(n));
}

std::optional<double> correlation_from(std::uint64_t n, u128 sum, u128 sum_sq,
                                       u128 sum_lag) {
  const i128 num = static_cast<i128>(n) * static_cast<i128>(sum_lag) -
                   static_cast<i128>(sum * sum);
  const i128 den = static_cast<i128>(n) * static_cast<i128>(sum_sq) -
                   static_cast<i128>(sum * sum);
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

bool inside_circle(const std::uint8_t* g) {
  const std::uint64_t x = std::uint64_t{g[0]} << 16 | std::uint64_t{g[1]} << 8 | g[2];
  const std::uint64_t y = std::uint64_t{g[3]} << 16 | std::uint64_t{g[4]} << 8 | g[5];
  return x * x + y * y <= kRadiusSq;
}

}  // namespace

double shannon_entropy(std::span<const std::uint8_t> bytes) {
  require_bytes(bytes, 1, "entropy");
  std::array<std::uint64_t, 256> hist{};
  for (auto b : bytes) ++hist[b];
  return entropy_from(hist, bytes.size());
}

double chi_square(std::span<const std::uint8_t> bytes) {
  require_bytes(bytes, 1, "chi-square");
  std::array<std::uint64_t, 256> hist{};
  for (auto b : bytes) ++hist[b];
  return chi_square_from(hist, bytes.size());
}

double arithmetic_mean(std::span<const std::uint8_t> bytes) {
  require_bytes(bytes, 1, "arithmetic mean");
  std::uint64_t sum = 0;
  for (auto b : bytes) sum += b;
  return static_cast<double>(sum) / static_cast<double>(bytes.size());
}

double monte_carlo_pi(std::span<const std::uint8_t> bytes) {
  require_bytes(bytes, 6, "Monte Carlo pi");
  const std::size_t points = bytes.size() / 6;
  std::size_t inside = 0;
  for (std::size_t i = 0; i < points; ++i)
    if (inside_circle(bytes.data() + 6 * i)) ++inside;
  return 4.0 * static_cast<double>(inside) / static_cast<double>(points);
}

std::optional<double> serial_correlation(std::span<const std::uint8_t> bytes) {
  require_bytes(bytes, 2, "serial correlation");
  u128 sum = 0, sum_sq = 0, sum_lag = 0;
  const std::size_t n = bytes.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t u = bytes[i];
    sum += u;
    sum_sq += u * u;
    sum_lag += u * bytes[(i + 1) % n];
  }
  return correlation_from(n, sum, sum_sq, sum_lag);
}

void EntAccumulator::add(std::span<const std::uint8_t> bytes) {
  for (auto b : bytes) {
    ++histogram_[b];
    sum_ += b;
    sum_sq_ += std::uint64_t{b} * b;
    if (count_ == 0)
      first_ = b;
    else
      sum_lag_ += std::uint64_t{last_} * b;
    last_ = b;
    ++count_;
    group_[group_fill_++] = b;
    if (group_fill_ == 6) {
      group_fill_ = 0;
      ++points_;
      if (inside_circle(group_.data())) ++inside_;
    }
  }
}

RandomnessReport EntAccumulator::report() const {
  if (count_ == 0) throw Error(ErrorKind::format, "cannot analyze empty input");
  RandomnessReport r;
  r.byte_count = count_;
  r.entropy = entropy_from(histogram_, count_);
  r.chi_square = chi_square_from(histogram_, count_);
  r.mean = static_cast<double>(sum_) / static_cast<double>(count_);
  if (points_ > 0)
    r.monte_carlo_pi =
        4.0 * static_cast<double>(inside_) / static_cast<double>(points_);
  if (count_ >= 2)
    r.serial_correlation = correlation_from(
        count_, sum_, sum_sq_, sum_lag_ + std::uint64_t{last_} * first_);
  return r;
}

RandomnessReport analyze(std::span<const std::uint8_t> bytes) {
  EntAccumulator acc;
  acc.add(bytes);
  return acc.report();
}

namespace {

MetricChange deviation_change(std::string name, double ideal_value,
                              std::optional<double> before,
                              std::optional<double> after) {
  MetricChange m{std::move(name), ideal_value, before, after, {}, {}, {}};
  if (before) m.before_deviation = std::fabs(*before - ideal_value);
  if (after) m.after_deviation = std::fabs(*after - ideal_value);
  if (m.before_deviation && m.after_deviation) {
    if (*m.before_deviation != 0.0)
      m.percent = (*m.before_deviation - *m.after_deviation) /
                  *m.before_deviation * 100.0;
    else if (*m.after_deviation == 0.0)
      m.percent = 0.0;
  }
  return m;
}

}  // namespace

Comparison compare(const RandomnessReport& before,
                   const RandomnessReport& after) {
  Comparison c;
  MetricChange e = deviation_change("entropy", ideal::entropy, before.entropy,
                                    after.entropy);
  if (before.entropy != 0.0)
    e.percent = (after.entropy - before.entropy) / before.entropy * 100.0;
  else
    e.percent = after.entropy == 0.0 ? std::optional<double>(0.0) : std::nullopt;
  c.metrics.push_back(std::move(e));
  c.metrics.push_back(deviation_change("chi_square", ideal::chi_square,
                                       before.chi_square, after.chi_square));
  c.metrics.push_back(
      deviation_change("mean", ideal::mean, before.mean, after.mean));
  c.metrics.push_back(deviation_change("monte_carlo_pi", ideal::pi,
                                       before.monte_carlo_pi,
                                       after.monte_carlo_pi));
  c.metrics.push_back(deviation_change("serial_correlation",
                                       ideal::serial_correlation,
                                       before.serial_correlation,
                                       after.serial_correlation));
  return c;
}

namespace {

std::string fixed6(std::optional<double> v) {
  if (!v) return "undefined";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

std::string percent2(std::optional<double> v) {
  if (!v) return "undefined";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", *v);
  return buf;
}

nlohmann::ordered_json json_value(std::optional<double> v) {
  if (!v) return nullptr;
  return std::stod(fixed6(v));
}

}  // namespace

std::string format_table(const RandomnessReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%-32s %20s %16s\n"
                "%-32s %20llu %16s\n"
                "%-32s %20s %16s\n"
                "%-32s %20s %16s\n"
                "%-32s %20s %16s\n"
                "%-32s %20s %16s\n"
                "%-32s %20s %16s\n",
                "Parameter", "Value", "Ideal",
                "Bytes", static_cast<unsigned long long>(r.byte_count), "",
                "Entropy (bits/byte)", fixed6(r.entropy).c_str(), "8.000000",
                "Chi-square", fixed6(r.chi_square).c_str(), "256.000000",
                "Arithmetic mean", fixed6(r.mean).c_str(), "127.500000",
                "Monte Carlo value of pi", fixed6(r.monte_carlo_pi).c_str(),
                "3.141593",
                "Serial correlation coefficient",
                fixed6(r.serial_correlation).c_str(), "0.000000");
  return buf;
}

std::string format_key_values(const RandomnessReport& r,
                              const std::string& prefix) {
  std::string out;
  out += prefix + "byte_count=" + std::to_string(r.byte_count) + "\n";
  out += prefix + "entropy=" + fixed6(r.entropy) + "\n";
  out += prefix + "chi_square=" + fixed6(r.chi_square) + "\n";
  out += prefix + "mean=" + fixed6(r.mean) + "\n";
  out += prefix + "monte_carlo_pi=" + fixed6(r.monte_carlo_pi) + "\n";
  out += prefix + "serial_correlation=" + fixed6(r.serial_correlation) + "\n";
  return out;
}

std::string format_json(const RandomnessReport& r) {
  nlohmann::ordered_json j;
  j["byte_count"] = r.byte_count;
  j["entropy"] = json_value(r.entropy);
  j["chi_square"] = json_value(r.chi_square);
  j["mean"] = json_value(r.mean);
  j["monte_carlo_pi"] = json_value(r.monte_carlo_pi);
  j["serial_correlation"] = json_value(r.serial_correlation);
  return j.dump(2);
}

std::string format_table(const Comparison& c) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-20s %16s %16s %16s %12s\n", "Metric",
                "Before", "After", "Ideal", "Change %");
  out += buf;
  for (const auto& m : c.metrics) {
    std::snprintf(buf, sizeof buf, "%-20s %16s %16s %16s %12s\n",
                  m.name.c_str(), fixed6(m.before).c_str(),
                  fixed6(m.after).c_str(), fixed6(m.ideal).c_str(),
                  percent2(m.percent).c_str());
    out += buf;
  }
  return out;
}

}  // namespace permx
