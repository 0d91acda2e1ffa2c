#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace qssp {

/// Non-negative integer resource count with an "unbounded" sentinel.
/// Consuming from an unbounded capacity leaves it unbounded.
class Capacity {
 public:
  constexpr Capacity() = default;
  constexpr explicit Capacity(std::int64_t value) : value_(value) {
    if (value < 0) throw std::invalid_argument("capacity must be non-negative");
  }

  static constexpr Capacity unbounded() {
    Capacity c;
    c.value_ = kUnbounded;
    return c;
  }

  constexpr bool is_unbounded() const { return value_ == kUnbounded; }
  constexpr bool exhausted() const { return value_ == 0; }

  /// Finite value; throws for unbounded capacities.
  std::int64_t value() const {
    if (is_unbounded()) throw std::logic_error("unbounded capacity has no finite value");
    return value_;
  }

  /// Finite value, or `fallback` when unbounded.
  constexpr std::int64_t value_or(std::int64_t fallback) const {
    return is_unbounded() ? fallback : value_;
  }

  void consume(std::int64_t units = 1) {
    if (is_unbounded()) return;
    if (units > value_) throw std::logic_error("capacity underflow");
    value_ -= units;
  }

  std::string to_string() const { return is_unbounded() ? "unbounded" : std::to_string(value_); }

  friend constexpr bool operator==(Capacity, Capacity) = default;
  friend constexpr auto operator<=>(Capacity a, Capacity b) { return a.value_ <=> b.value_; }

  friend constexpr Capacity min(Capacity a, Capacity b) { return a.value_ <= b.value_ ? a : b; }

 private:
  static constexpr std::int64_t kUnbounded = std::numeric_limits<std::int64_t>::max();
  std::int64_t value_ = 0;
};

}  // namespace qssp
