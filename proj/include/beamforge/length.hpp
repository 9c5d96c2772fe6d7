#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace beamforge {

// A length held as an exact number of centimeters. Every capacity and waste
// comparison in the library is an integer comparison on this type.
class Length {
 public:
  constexpr Length() = default;

  static constexpr Length from_cm(std::int64_t cm) { return Length(cm); }

  // Throws std::invalid_argument when `meters` is not within 1e-6 m of a whole
  // centimeter (at most two fractional digits are representable).
  static Length from_meters(double meters);

  constexpr std::int64_t cm() const { return cm_; }
  double meters() const { return static_cast<double>(cm_) / 100.0; }

  constexpr auto operator<=>(const Length&) const = default;

  constexpr Length& operator+=(Length o) {
    cm_ += o.cm_;
    return *this;
  }
  constexpr Length& operator-=(Length o) {
    cm_ -= o.cm_;
    return *this;
  }
  friend constexpr Length operator+(Length a, Length b) { return a += b; }
  friend constexpr Length operator-(Length a, Length b) { return a -= b; }
  friend constexpr Length operator*(Length a, std::int64_t k) {
    return Length(a.cm_ * k);
  }
  friend constexpr Length operator*(std::int64_t k, Length a) { return a * k; }

  // Decimal meters, trailing zeros trimmed ("5.95", "12", "0.05").
  std::string to_string() const;

 private:
  constexpr explicit Length(std::int64_t cm) : cm_(cm) {}
  std::int64_t cm_ = 0;
};

// ceil(num / den) for num >= 0, den > 0.
constexpr std::int64_t ceil_div(std::int64_t num, std::int64_t den) {
  return (num + den - 1) / den;
}

}  // namespace beamforge
