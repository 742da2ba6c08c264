#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ecoval {

enum class Ecosystem : std::uint8_t { alpha = 0, beta = 1 };

inline constexpr std::string_view to_string(Ecosystem e) noexcept {
  return e == Ecosystem::alpha ? "alpha" : "beta";
}

using RegionId = int;  // 1..5
using OrderId = std::uint64_t;
using AgentId = std::uint64_t;  // creation sequence, shared by both ecosystems

inline constexpr int kRegionCount = 5;
inline constexpr int kMaxLevel = 3;

/// Running sum with Neumaier compensation. Ledgers add millions of small
/// amounts to totals near 1e7, where plain double drift breaks a 1e-6 audit.
class Tally {
 public:
  constexpr Tally(double v = 0.0) noexcept : sum_(v) {}

  constexpr Tally& operator+=(double v) noexcept {
    const double t = sum_ + v;
    if ((sum_ >= 0 ? sum_ : -sum_) >= (v >= 0 ? v : -v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
    return *this;
  }
  constexpr Tally& operator-=(double v) noexcept { return *this += -v; }

  constexpr double value() const noexcept { return sum_ + comp_; }
  constexpr operator double() const noexcept { return value(); }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Invalid configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ecoval
