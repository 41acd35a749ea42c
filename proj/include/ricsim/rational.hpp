// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace ricsim {

/// Exact non-negative-denominator fraction over int64, normalised. Products
/// are formed in 128 bits; a result that does not fit int64 throws.
class Rational {
public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1) {
    if (den == 0) throw std::domain_error("zero denominator");
    assign(static_cast<__int128>(num), static_cast<__int128>(den));
  }

  [[nodiscard]] std::int64_t num() const { return num_; }
  [[nodiscard]] std::int64_t den() const { return den_; }
  [[nodiscard]] double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    const std::int64_t g = std::gcd(a.den_, b.den_);
    const __int128 den = static_cast<__int128>(a.den_ / g) * b.den_;
    const __int128 num = static_cast<__int128>(a.num_) * (b.den_ / g) +
                         static_cast<__int128>(b.num_) * (a.den_ / g);
    Rational r;
    r.assign(num, den);
    return r;
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }

  friend Rational operator*(const Rational& a, const Rational& b) {
    Rational r;
    r.assign(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
    return r;
  }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
  }

private:
  void assign(__int128 num, __int128 den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    __int128 a = num < 0 ? -num : num;
    __int128 b = den;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num /= a;
      den /= a;
    }
    if (num > INT64_MAX || num < INT64_MIN || den > INT64_MAX)
      throw std::overflow_error("rational out of int64 range");
    num_ = static_cast<std::int64_t>(num);
    den_ = static_cast<std::int64_t>(den);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace ricsim
